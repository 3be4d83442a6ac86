//! `sphdim`: dimensions, complexes, sphere witnesses and reports for finite concept classes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sphdim_core::complex::{delta_ant, face_counts, realizable_complex, AntipodalComplex, SimplicialComplex, FACE_CAP};
use sphdim_core::concept::{
    family_class, largest_shattered_set, product_class, ConceptClass, DimensionVariant, Family, DEFAULT_MAX_HYPOTHESES,
};
use sphdim_core::extremal::{
    classify_low_vc, collapse_certificate, cubical_barycentric, cubical_complex, full_subcomplex_embedding_check,
    is_extremal, LowVcClassification, DEFAULT_COLLAPSE_BUDGET,
};
use sphdim_core::io::{self, Artifact, CubicalArtifact, SCHEMA_VERSION};
use sphdim_core::report::build_report;
use sphdim_core::signrank::SignRepresentation;
use sphdim_core::spheres::{
    barycentric_witness, crosspolytope_witness, sd_bounds, SdOptions, SphereWitness, MAX_BARYCENTRIC_DIM,
    MAX_CROSSPOLYTOPE_DIM,
};
use sphdim_core::Error;

const DEFAULT_MAX_DOMAIN: usize = 1 << 16;

#[derive(Parser, Debug)]
#[command(name = "sphdim", version, about = "Spherical dimension toolkit for finite concept classes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit machine-readable JSON with a schema version field.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Reject classes whose domain is larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DOMAIN)]
    max_domain: usize,
    /// Reject classes (and products) with more hypotheses than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_HYPOTHESES)]
    max_hypotheses: usize,
    /// Search-node budget for collapse certificates.
    #[arg(long, global = true, default_value_t = DEFAULT_COLLAPSE_BUDGET)]
    collapse_budget: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// VC, dual, antipodal and dual antipodal dimensions with witnessing sets.
    Dims {
        /// Class file (text or JSON) or `@family:n[:extra][^m]`.
        class: String,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
    },
    /// Export the complex of realizable distributions or its antipodal part.
    Complex {
        class: String,
        #[arg(long)]
        antipodal: bool,
        /// Number of barycentric subdivisions to apply.
        #[arg(long, default_value_t = 0)]
        barycentric: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and verify a sphere witness in the antipodal complex.
    Witness {
        class: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certified lower and upper bounds on the spherical dimension.
    Sd {
        class: String,
        /// Sign-rank certificate (representation JSON) used as an extra upper bound.
        #[arg(long)]
        sign_rank: Option<PathBuf>,
        #[arg(long)]
        no_hexagon: bool,
    },
    /// Pajor counts, cubical complex, collapse certificate and embedding check.
    Extremal {
        class: String,
        /// Write the cubical complex (with its collapse sequence) as JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Low-VC classification with its certificate.
    Classify { class: String },
    /// Generate a named family, optionally as a product power.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        n: usize,
        /// Product power.
        #[arg(short = 'm', long, default_value_t = 1)]
        power: usize,
        /// Ground set size for subsets_leq.
        #[arg(long)]
        extra: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Product of two classes on the disjoint union of their domains.
    Product {
        a: String,
        b: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// One-row summary: dimensions, sd interval, extremality, classification.
    Report {
        class: String,
        /// Name shown in the report (defaults to the source name).
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        sign_rank: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Primal,
    Dual,
    PrimalAntipodal,
    DualAntipodal,
}

impl From<Variant> for DimensionVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Primal => DimensionVariant::Primal,
            Variant::Dual => DimensionVariant::Dual,
            Variant::PrimalAntipodal => DimensionVariant::PrimalAntipodal,
            Variant::DualAntipodal => DimensionVariant::DualAntipodal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Crosspolytope,
    Barycentric,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyName {
    Cube,
    Universal,
    UniversalPlus,
    Threshold,
    SubsetsLeq,
}

impl From<FamilyName> for Family {
    fn from(f: FamilyName) -> Self {
        match f {
            FamilyName::Cube => Family::Cube,
            FamilyName::Universal => Family::Universal,
            FamilyName::UniversalPlus => Family::UniversalPlus,
            FamilyName::Threshold => Family::Threshold,
            FamilyName::SubsetsLeq => Family::SubsetsLeq,
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_verification() {
            2
        } else if e.is_budget() {
            3
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Ctx {
    global: Global,
}

/// A loaded class together with a display name.
struct Source {
    name: String,
    class: ConceptClass,
}

fn family_power(family: Family, n: usize, extra: Option<usize>, m: usize, max_h: usize) -> CliResult<ConceptClass> {
    if m == 0 {
        return Err(usage("product power must be at least 1"));
    }
    let base = family_class(family, n, extra)?;
    let mut acc = base.clone();
    for _ in 1..m {
        acc = product_class(&acc, &base, max_h)?;
    }
    Ok(acc)
}

/// Parses `@name:n[:extra][^m]`.
fn parse_family_spec(spec: &str, max_h: usize) -> CliResult<Source> {
    let (body, power) = match spec.split_once('^') {
        Some((b, p)) => (b, p.parse::<usize>().map_err(|_| usage(format!("bad power in {spec:?}")))?),
        None => (spec, 1),
    };
    let mut parts = body.split(':');
    let family: Family = parts.next().unwrap_or_default().parse()?;
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| usage(format!("family source {spec:?} needs a size, as in @cube:3")))?;
    let extra = match parts.next() {
        Some(s) => Some(s.parse().map_err(|_| usage(format!("bad extra parameter in {spec:?}")))?),
        None => None,
    };
    if parts.next().is_some() {
        return Err(usage(format!("too many fields in family source {spec:?}")));
    }
    let class = family_power(family, n, extra, power, max_h)?;
    let mut name = format!("{family}({n}");
    if let Some(e) = extra {
        let _ = write!(name, ",{e}");
    }
    name.push(')');
    if power > 1 {
        let _ = write!(name, "^{power}");
    }
    Ok(Source { name, class })
}

impl Ctx {
    fn load(&self, src: &str) -> CliResult<Source> {
        let s = match src.strip_prefix('@') {
            Some(spec) => parse_family_spec(spec, self.global.max_hypotheses)?,
            None => {
                let path = Path::new(src);
                let name = path
                    .file_stem()
                    .map_or_else(|| src.to_string(), |s| s.to_string_lossy().into_owned());
                let class = io::read_class(path).map_err(|e| match e {
                    Error::Io(e) => usage(format!("{}: {e}", path.display())),
                    e => e.into(),
                })?;
                Source { name, class }
            }
        };
        self.check_caps(&s.class)?;
        Ok(s)
    }

    fn check_caps(&self, c: &ConceptClass) -> CliResult<()> {
        if c.domain_size() > self.global.max_domain {
            return Err(Error::CapExceeded {
                what: "domain size (--max-domain)",
                limit: self.global.max_domain as u64,
                actual: c.domain_size() as u64,
            }
            .into());
        }
        if c.len() > self.global.max_hypotheses {
            return Err(Error::CapExceeded {
                what: "hypothesis count (--max-hypotheses)",
                limit: self.global.max_hypotheses as u64,
                actual: c.len() as u64,
            }
            .into());
        }
        Ok(())
    }
}

/// Non-artifact JSON output.
fn command_json(command: &str, result: Value) -> String {
    let v = json!({ "schema_version": SCHEMA_VERSION, "command": command, "result": result });
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("values serialize")
}

fn write_artifact<T: Artifact>(value: &T, path: &Path) -> CliResult<()> {
    io::store(value, path)?;
    Ok(())
}

fn fmt_set(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn fmt_counts<T: ToString>(c: &[T]) -> String {
    let items: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", items.join(", "))
}

fn cmd_dims(ctx: &Ctx, src: &str, variant: Option<Variant>) -> CliResult<String> {
    let s = ctx.load(src)?;
    let variants: Vec<DimensionVariant> = match variant {
        Some(v) => vec![v.into()],
        None => DimensionVariant::ALL.to_vec(),
    };
    let mut rows = Vec::new();
    for v in variants {
        rows.push((v, largest_shattered_set(&s.class, v)?));
    }
    if ctx.global.json {
        let result: Vec<Value> = rows
            .iter()
            .map(|(v, set)| json!({ "variant": v, "symbol": v.symbol(), "value": set.len(), "witness": set }))
            .collect();
        return Ok(command_json("dims", json!({ "class": s.name, "dimensions": result })));
    }
    let mut out = format!("class {} (|X| = {}, |H| = {})\n", s.name, s.class.domain_size(), s.class.len());
    let _ = writeln!(out, "{:<6} {:>5}  witness", "dim", "value");
    for (v, set) in rows {
        let what = if v.is_dual() { "hypotheses" } else { "points" };
        let _ = writeln!(out, "{:<6} {:>5}  {what} {}", v.symbol(), set.len(), fmt_set(&set));
    }
    Ok(out)
}

fn complex_summary(k: &SimplicialComplex) -> CliResult<(isize, Vec<u64>)> {
    Ok((k.dim(), face_counts(k, FACE_CAP)?))
}

fn cmd_complex(ctx: &Ctx, src: &str, antipodal: bool, k: usize, output: Option<&Path>) -> CliResult<String> {
    let s = ctx.load(src)?;
    enum Built {
        Plain(SimplicialComplex),
        Antipodal(AntipodalComplex),
    }
    let built = if antipodal {
        let mut a = delta_ant(&s.class)?;
        for _ in 0..k {
            a = a.barycentric()?;
        }
        Built::Antipodal(a)
    } else {
        let mut c = realizable_complex(&s.class)?.complex;
        for _ in 0..k {
            c = c.barycentric()?;
        }
        Built::Plain(c)
    };
    let (text, inner) = match &built {
        Built::Plain(c) => (io::to_json(c)?, c),
        Built::Antipodal(a) => (io::to_json(a)?, a.complex()),
    };
    if let Some(p) = output {
        std::fs::write(p, &text).map_err(Error::from)?;
    }
    if ctx.global.json {
        return Ok(if output.is_some() { String::new() } else { text });
    }
    let (dim, counts) = complex_summary(inner)?;
    let which = if antipodal { "antipodal complex" } else { "complex of realizable distributions" };
    let mut out = format!("{which} of {}", s.name);
    if k > 0 {
        let _ = write!(out, ", subdivided {k} time(s)");
    }
    out.push('\n');
    let _ = writeln!(out, "vertices          {}", inner.vertex_count());
    let _ = writeln!(out, "maximal simplices {}", inner.maximal_simplices().len());
    let _ = writeln!(out, "dimension         {dim}");
    let _ = writeln!(out, "face counts       {}", fmt_counts(&counts));
    if let Some(p) = output {
        let _ = writeln!(out, "written to        {}", p.display());
    }
    Ok(out)
}

fn crosspolytope_for(class: &ConceptClass) -> CliResult<Option<SphereWitness>> {
    let mut s = largest_shattered_set(class, DimensionVariant::Primal)?;
    s.truncate(MAX_CROSSPOLYTOPE_DIM + 1);
    if s.is_empty() {
        return Ok(None);
    }
    Ok(Some(crosspolytope_witness(class, &s)?))
}

fn barycentric_for(class: &ConceptClass) -> CliResult<Option<SphereWitness>> {
    let mut hs = largest_shattered_set(class, DimensionVariant::DualAntipodal)?;
    hs.truncate(MAX_BARYCENTRIC_DIM + 2);
    if hs.len() < 2 {
        return Ok(None);
    }
    Ok(Some(barycentric_witness(class, &hs)?))
}

fn cmd_witness(ctx: &Ctx, src: &str, method: Method, output: Option<&Path>) -> CliResult<String> {
    let s = ctx.load(src)?;
    let w = match method {
        Method::Crosspolytope => crosspolytope_for(&s.class)?,
        Method::Barycentric => barycentric_for(&s.class)?,
        Method::Auto => {
            let bounds = sd_bounds(&s.class, &SdOptions::default())?;
            bounds.best_lower().witness.clone()
        }
    };
    let w = w.ok_or_else(|| usage(format!("no {method:?} witness exists for {}", s.name).to_lowercase()))?;
    let report = w.verify();
    if let Some(p) = output {
        write_artifact(&w, p)?;
    }
    let out = if ctx.global.json {
        if output.is_some() {
            String::new()
        } else {
            io::to_json(&w)?
        }
    } else {
        let mut out = format!("witness for {}: template {} (dimension {})\n", s.name, w.template.kind, w.dim());
        let _ = writeln!(out, "embedded {}", w.embedded);
        for line in &report.transcript {
            let _ = writeln!(out, "  ok: {line}");
        }
        if let Some(f) = &report.failure {
            let _ = writeln!(out, "  FAILED: {f}");
        }
        if let Some(p) = output {
            let _ = writeln!(out, "written to {}", p.display());
        }
        out
    };
    if let Some(f) = report.failure {
        print!("{out}");
        return Err(Error::Verification(f.to_string()).into());
    }
    Ok(out)
}

fn sd_options(sign_rank: Option<&Path>, no_hexagon: bool) -> CliResult<SdOptions> {
    let sign_rank = match sign_rank {
        Some(p) => Some(io::load::<SignRepresentation>(p)?),
        None => None,
    };
    Ok(SdOptions { no_hexagon, sign_rank })
}

fn cmd_sd(ctx: &Ctx, src: &str, sign_rank: Option<&Path>, no_hexagon: bool) -> CliResult<String> {
    let s = ctx.load(src)?;
    let b = sd_bounds(&s.class, &sd_options(sign_rank, no_hexagon)?)?;
    if ctx.global.json {
        return Ok(command_json("sd", json!({ "class": s.name, "bounds": to_value(&b) })));
    }
    let interval = if b.lower == b.upper {
        format!("sd = {}", b.lower)
    } else {
        format!("sd in [{}, {}]", b.lower, b.upper)
    };
    let mut out = format!("{}: {interval}\n", s.name);
    out.push_str("lower certificates\n");
    for c in &b.lower_certificates {
        let mark = if c.value == b.lower { "*" } else { " " };
        let _ = writeln!(out, " {mark} {:>3}  {}", c.value, c.source.name());
    }
    out.push_str("upper certificates\n");
    for c in &b.upper_certificates {
        let mark = if c.value == b.upper { "*" } else { " " };
        let _ = writeln!(out, " {mark} {:>3}  {}", c.value, c.source.name());
    }
    Ok(out)
}

fn cmd_extremal(ctx: &Ctx, src: &str, output: Option<&Path>) -> CliResult<String> {
    let s = ctx.load(src)?;
    let pajor = is_extremal(&s.class)?;
    let cc = cubical_complex(&s.class)?;
    let counts = cc.counts();
    let bary = face_counts(&cubical_barycentric(&cc)?, FACE_CAP)?;
    let (collapse, embedding) = if pajor.extremal {
        (
            Some(collapse_certificate(&cc, ctx.global.collapse_budget)?),
            Some(full_subcomplex_embedding_check(&s.class)?),
        )
    } else {
        (None, None)
    };
    if let Some(p) = output {
        write_artifact(
            &CubicalArtifact {
                complex: cc.clone(),
                collapse: collapse.clone().flatten(),
            },
            p,
        )?;
    }
    if ctx.global.json {
        let collapse_v = match &collapse {
            None => Value::Null,
            Some(None) => json!({ "collapsible": false }),
            Some(Some(c)) => json!({ "collapsible": true, "steps": c.steps.len(), "nodes": c.nodes }),
        };
        return Ok(command_json(
            "extremal",
            json!({
                "class": s.name,
                "pajor": to_value(&pajor),
                "cube_counts": counts,
                "cube_dim": cc.dim(),
                "barycentric_counts": bary,
                "collapse": collapse_v,
                "embedding": embedding.as_ref().map(to_value),
            }),
        ));
    }
    let mut out = format!("class {}\n", s.name);
    let _ = writeln!(
        out,
        "Pajor         |H| = {}, shattered sets = {}, extremal = {}",
        pajor.size, pajor.shattered, pajor.extremal
    );
    let _ = writeln!(out, "cubes         {} (dimension {})", fmt_counts(&counts), cc.dim());
    let _ = writeln!(out, "barycentric   {}", fmt_counts(&bary));
    match &collapse {
        None => out.push_str("collapse      skipped (class is not extremal)\n"),
        Some(None) => out.push_str("collapse      no collapse sequence found\n"),
        Some(Some(c)) => {
            let _ = writeln!(out, "collapse      {} elementary collapses ({} search nodes)", c.steps.len(), c.nodes);
        }
    }
    match &embedding {
        None => out.push_str("embedding     skipped (class is not extremal)\n"),
        Some(e) => {
            let case = match e.case {
                sphdim_core::extremal::EmbeddingCase::CubesIntoDelta { full } => {
                    format!("cubes into subdivided complex, full = {full}")
                }
                sphdim_core::extremal::EmbeddingCase::DeltaIntoCubes => "subdivided complex into cubes".to_string(),
            };
            let verdict = match &e.failure {
                None => "ok".to_string(),
                Some(f) => format!("FAILED: {f}"),
            };
            let _ = writeln!(
                out,
                "embedding     {case}; {} / {} vertices; {verdict}",
                e.cube_vertices, e.delta_vertices
            );
        }
    }
    if let Some(p) = output {
        let _ = writeln!(out, "written to    {}", p.display());
    }
    if let Some(e) = embedding.filter(|e| !e.ok()) {
        print!("{out}");
        return Err(Error::Verification(e.failure.unwrap_or_default()).into());
    }
    Ok(out)
}

fn signs(v: &[sphdim_core::concept::Sign]) -> String {
    v.iter().map(|s| s.as_char()).collect()
}

fn cmd_classify(ctx: &Ctx, src: &str) -> CliResult<String> {
    let s = ctx.load(src)?;
    let c = classify_low_vc(&s.class)?;
    let (cert_json, cert_text) = match &c {
        LowVcClassification::Singleton => (json!({}), "the class has one concept".to_string()),
        LowVcClassification::ThresholdLike { flip, order } => (
            json!({ "flip": signs(flip), "order": order }),
            format!("flip {} then order {}", signs(flip), fmt_set(order).replace(['{', '}'], "")),
        ),
        LowVcClassification::Vc1NonThreshold { witness } => {
            let r = witness.verify();
            if let Some(f) = r.failure {
                return Err(Error::Verification(format!("hexagon witness: {f}")).into());
            }
            let cycle: Vec<String> = witness
                .vertex_map
                .iter()
                .map(|&u| witness.target.vertices()[u].to_string())
                .collect();
            (
                json!({ "hexagon": cycle, "verified": true }),
                format!("verified hexagon {}", cycle.join(" ")),
            )
        }
        LowVcClassification::Vc2Plus { pair } => (
            json!({ "shattered_pair": pair }),
            format!("shattered pair {}", fmt_set(pair)),
        ),
    };
    if ctx.global.json {
        return Ok(command_json(
            "classify",
            json!({ "class": s.name, "bucket": c.bucket(), "certificate": cert_json }),
        ));
    }
    Ok(format!("{}: {}\ncertificate: {cert_text}\n", s.name, c.bucket()))
}

fn emit_class(ctx: &Ctx, class: &ConceptClass, output: Option<&Path>) -> CliResult<String> {
    let text = if ctx.global.json {
        io::to_json(class)?
    } else {
        class.to_text()
    };
    match output {
        Some(p) => {
            std::fs::write(p, text).map_err(Error::from)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_report(ctx: &Ctx, src: &str, name: Option<&str>, sign_rank: Option<&Path>) -> CliResult<String> {
    let s = ctx.load(src)?;
    let r = build_report(&s.class, Some(name.unwrap_or(&s.name)), &sd_options(sign_rank, false)?)?;
    if ctx.global.json {
        return Ok(io::to_json(&r)?);
    }
    Ok(r.to_string())
}

fn run(cli: Cli) -> CliResult<String> {
    let ctx = Ctx { global: cli.global };
    if ctx.global.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(ctx.global.workers)
            .build_global()
            .map_err(|e| usage(format!("cannot configure worker pool: {e}")))?;
    }
    match &cli.command {
        Command::Dims { class, variant } => cmd_dims(&ctx, class, *variant),
        Command::Complex {
            class,
            antipodal,
            barycentric,
            output,
        } => cmd_complex(&ctx, class, *antipodal, *barycentric, output.as_deref()),
        Command::Witness { class, method, output } => cmd_witness(&ctx, class, *method, output.as_deref()),
        Command::Sd {
            class,
            sign_rank,
            no_hexagon,
        } => cmd_sd(&ctx, class, sign_rank.as_deref(), *no_hexagon),
        Command::Extremal { class, output } => cmd_extremal(&ctx, class, output.as_deref()),
        Command::Classify { class } => cmd_classify(&ctx, class),
        Command::Family {
            name,
            n,
            power,
            extra,
            output,
        } => {
            let c = family_power((*name).into(), *n, *extra, *power, ctx.global.max_hypotheses)?;
            emit_class(&ctx, &c, output.as_deref())
        }
        Command::Product { a, b, output } => {
            let a = ctx.load(a)?;
            let b = ctx.load(b)?;
            let c = product_class(&a.class, &b.class, ctx.global.max_hypotheses)?;
            emit_class(&ctx, &c, output.as_deref())
        }
        Command::Report { class, name, sign_rank } => cmd_report(&ctx, class, name.as_deref(), sign_rank.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("sphdim: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
