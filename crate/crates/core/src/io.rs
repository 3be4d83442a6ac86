//! Versioned JSON envelopes for every artifact kind, plus the plain-text
//! class format.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{AntipodalComplex, SimplicialComplex, VertexLabel};
use crate::concept::{parse_class, ConceptClass, PartialHypothesis};
use crate::disamb::{AntipodalDomain, Disambiguation, PairedClass};
use crate::error::{Error, Result};
use crate::extremal::{CollapseOutcome, CubicalComplex};
use crate::report::Report;
use crate::signrank::SignRepresentation;
use crate::spheres::{verify_witness, SphereTemplate, SphereWitness, TemplateKind};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Class,
    Complex,
    Witness,
    Cubical,
    Representation,
    Report,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemaEnvelope {
    pub schema_version: String,
    pub kind: Kind,
    pub payload: Value,
}

fn parse_version(v: &str) -> Option<(u32, u32)> {
    let (a, b) = v.split_once('.')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

impl SchemaEnvelope {
    pub fn new(kind: Kind, payload: Value) -> Self {
        SchemaEnvelope {
            schema_version: SCHEMA_VERSION.to_string(),
            kind,
            payload,
        }
    }

    /// Accepts versions with the current major number and a minor number no newer than ours.
    pub fn check(&self, kind: Kind) -> Result<()> {
        let (major, minor) = parse_version(SCHEMA_VERSION).expect("valid constant");
        match parse_version(&self.schema_version) {
            Some((a, b)) if a == major && b <= minor => {}
            _ => {
                return Err(Error::Schema(format!(
                    "unsupported schema version {:?} (this build reads {SCHEMA_VERSION})",
                    self.schema_version
                )))
            }
        }
        if self.kind != kind {
            return Err(Error::Schema(format!("expected kind {kind:?}, found {:?}", self.kind)));
        }
        Ok(())
    }
}

/// A value that can travel inside an envelope.
pub trait Artifact: Sized {
    const KIND: Kind;
    fn to_payload(&self) -> Result<Value>;
    fn from_payload(v: Value) -> Result<Self>;
}

fn field<T: for<'de> Deserialize<'de>>(v: &Value, key: &str) -> Result<T> {
    let f = v
        .get(key)
        .ok_or_else(|| Error::Schema(format!("missing field {key:?}")))?;
    serde_json::from_value(f.clone()).map_err(|e| Error::Schema(format!("field {key:?}: {e}")))
}

fn labels(vs: &[String]) -> Result<Vec<VertexLabel>> {
    vs.iter()
        .map(|s| s.parse().map_err(|e| Error::Schema(format!("vertex label {s:?}: {e}"))))
        .collect()
}

impl Artifact for ConceptClass {
    const KIND: Kind = Kind::Class;

    fn to_payload(&self) -> Result<Value> {
        let rows: Vec<String> = self.hypotheses().iter().map(|h| h.to_string()).collect();
        Ok(json!({ "n": self.domain_size(), "rows": rows }))
    }

    fn from_payload(v: Value) -> Result<Self> {
        let n: usize = field(&v, "n")?;
        let rows: Vec<String> = field(&v, "rows")?;
        let hyps = rows
            .iter()
            .map(|r| r.parse::<PartialHypothesis>())
            .collect::<Result<Vec<_>>>()?;
        if let Some(h) = hyps.iter().find(|h| h.len() != n) {
            return Err(Error::Schema(format!("row {h} does not have length {n}")));
        }
        ConceptClass::new(n, hyps)
    }
}

fn complex_payload(k: &SimplicialComplex, involution: Option<&[usize]>) -> Value {
    let vertices: Vec<String> = k.vertices().iter().map(|l| l.to_string()).collect();
    let maximal: Vec<Vec<usize>> = k.maximal_simplices().iter().map(|s| s.to_vec()).collect();
    let mut v = json!({ "vertices": vertices, "maximal": maximal });
    if let Some(inv) = involution {
        v["involution"] = json!(inv);
    }
    v
}

fn complex_from_payload(v: &Value) -> Result<(SimplicialComplex, Option<Vec<usize>>)> {
    let vertices = labels(&field::<Vec<String>>(v, "vertices")?)?;
    let maximal: Vec<Vec<usize>> = field(v, "maximal")?;
    let k = SimplicialComplex::from_maximal(vertices, maximal)?;
    let inv = match v.get("involution") {
        None | Some(Value::Null) => None,
        Some(_) => Some(field(v, "involution")?),
    };
    Ok((k, inv))
}

impl Artifact for SimplicialComplex {
    const KIND: Kind = Kind::Complex;

    fn to_payload(&self) -> Result<Value> {
        Ok(complex_payload(self, None))
    }

    fn from_payload(v: Value) -> Result<Self> {
        let (k, inv) = complex_from_payload(&v)?;
        if inv.is_some() {
            return Err(Error::Schema("complex carries an involution; load it as an antipodal complex".into()));
        }
        Ok(k)
    }
}

impl Artifact for AntipodalComplex {
    const KIND: Kind = Kind::Complex;

    fn to_payload(&self) -> Result<Value> {
        Ok(complex_payload(self.complex(), Some(self.involution())))
    }

    fn from_payload(v: Value) -> Result<Self> {
        let (k, inv) = complex_from_payload(&v)?;
        let inv = inv.ok_or_else(|| Error::Schema("missing field \"involution\"".into()))?;
        AntipodalComplex::new(k, inv)
    }
}

impl Artifact for SphereWitness {
    const KIND: Kind = Kind::Witness;

    fn to_payload(&self) -> Result<Value> {
        let tv = self.template.complex.vertices();
        let gv = self.target.vertices();
        let pairs: Vec<[String; 2]> = self
            .vertex_map
            .iter()
            .enumerate()
            .map(|(v, &u)| [tv[v].to_string(), gv.get(u).map_or_else(|| format!("#{u}"), |l| l.to_string())])
            .collect();
        Ok(json!({
            "template": self.template.kind,
            "vertices": tv.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "vertex_map": pairs,
            "target": complex_payload(self.target.complex(), Some(self.target.involution())),
            "embedded": self.embedded,
            "transcript": verify_witness(self).transcript,
        }))
    }

    fn from_payload(v: Value) -> Result<Self> {
        let kind: TemplateKind = field(&v, "template")?;
        let template = SphereTemplate::new(kind)?;
        let target = AntipodalComplex::from_payload(
            v.get("target")
                .cloned()
                .ok_or_else(|| Error::Schema("missing field \"target\"".into()))?,
        )?;
        let pairs: Vec<[String; 2]> = field(&v, "vertex_map")?;
        let mut vertex_map = vec![usize::MAX; template.complex.vertex_count()];
        for [a, b] in &pairs {
            let a: VertexLabel = a.parse()?;
            let b: VertexLabel = b.parse()?;
            let i = template
                .complex
                .index_of(&a)
                .ok_or_else(|| Error::Schema(format!("{a} is not a template vertex")))?;
            vertex_map[i] = target
                .index_of(&b)
                .ok_or_else(|| Error::Schema(format!("{b} is not a target vertex")))?;
        }
        if vertex_map.contains(&usize::MAX) {
            return Err(Error::Schema("vertex map does not cover every template vertex".into()));
        }
        Ok(SphereWitness {
            template,
            vertex_map,
            target,
            embedded: field(&v, "embedded")?,
        })
    }
}

/// A cubical complex with an optional collapse sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalArtifact {
    pub complex: CubicalComplex,
    pub collapse: Option<CollapseOutcome>,
}

impl Artifact for CubicalArtifact {
    const KIND: Kind = Kind::Cubical;

    fn to_payload(&self) -> Result<Value> {
        let mut v = json!({ "cubes": self.complex.cubes() });
        if let Some(c) = &self.collapse {
            v["collapse"] = json!(c.steps);
            v["collapse_nodes"] = json!(c.nodes);
        }
        Ok(v)
    }

    fn from_payload(v: Value) -> Result<Self> {
        let cubes: Vec<PartialHypothesis> = field(&v, "cubes")?;
        let n = cubes.first().map_or(0, |c| c.len());
        let complex = CubicalComplex::from_cubes(n, cubes)?;
        let collapse = match v.get("collapse") {
            None | Some(Value::Null) => None,
            Some(_) => {
                let c = CollapseOutcome {
                    steps: field(&v, "collapse")?,
                    nodes: field(&v, "collapse_nodes").unwrap_or(0),
                };
                if !c.verify(&complex) {
                    return Err(Error::Verification("stored collapse sequence does not replay".into()));
                }
                Some(c)
            }
        };
        Ok(CubicalArtifact { complex, collapse })
    }
}

impl Artifact for SignRepresentation {
    const KIND: Kind = Kind::Representation;

    fn to_payload(&self) -> Result<Value> {
        Ok(serde_json::to_value(self)?)
    }

    fn from_payload(v: Value) -> Result<Self> {
        serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
    }
}

impl Artifact for Report {
    const KIND: Kind = Kind::Report;

    fn to_payload(&self) -> Result<Value> {
        Ok(serde_json::to_value(self)?)
    }

    fn from_payload(v: Value) -> Result<Self> {
        serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Artifact>(value: &T) -> Result<String> {
    let env = SchemaEnvelope::new(T::KIND, value.to_payload()?);
    let mut s = serde_json::to_string_pretty(&serde_json::to_value(&env)?)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: Artifact>(text: &str) -> Result<T> {
    let env: SchemaEnvelope = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    env.check(T::KIND)?;
    T::from_payload(env.payload)
}

pub fn store<T: Artifact>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn load<T: Artifact>(path: &Path) -> Result<T> {
    from_json(&std::fs::read_to_string(path)?)
}

/// Reads a class from either a JSON envelope or the text format.
pub fn read_class(path: &Path) -> Result<ConceptClass> {
    let text = std::fs::read_to_string(path)?;
    parse_class_any(&text)
}

pub fn parse_class_any(text: &str) -> Result<ConceptClass> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        parse_class(text)
    }
}

pub fn write_class_text(class: &ConceptClass, path: &Path) -> Result<()> {
    std::fs::write(path, class.to_text())?;
    Ok(())
}

/// Companion file for a disambiguation stored as a class file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisambiguationCompanion {
    pub schema_version: String,
    pub template: TemplateKind,
    pub involution: Vec<usize>,
    pub representation: Vec<usize>,
}

/// Writes the class to `class_path` and the template and pairing to `companion_path`.
pub fn store_disambiguation(d: &Disambiguation, class_path: &Path, companion_path: &Path) -> Result<()> {
    let dom = &d.paired.domain;
    let companion = DisambiguationCompanion {
        schema_version: SCHEMA_VERSION.to_string(),
        template: d.template.kind.clone(),
        involution: dom.involution().to_vec(),
        representation: (0..dom.size()).map(|x| dom.rep(x)).collect(),
    };
    let mut s = serde_json::to_string_pretty(&serde_json::to_value(&companion)?)?;
    s.push('\n');
    write_class_text(&d.paired.class, class_path)?;
    std::fs::write(companion_path, s)?;
    Ok(())
}

/// Reads a class file and its companion; the pairing must match the template's involution.
pub fn load_disambiguation(class_path: &Path, companion_path: &Path) -> Result<Disambiguation> {
    let companion: DisambiguationCompanion = serde_json::from_str(&std::fs::read_to_string(companion_path)?)
        .map_err(|e| Error::Schema(e.to_string()))?;
    let env = SchemaEnvelope {
        schema_version: companion.schema_version.clone(),
        kind: Kind::Class,
        payload: Value::Null,
    };
    env.check(Kind::Class)?;
    let template = SphereTemplate::new(companion.template)?;
    if template.complex.involution() != companion.involution.as_slice() {
        return Err(Error::DomainMismatch("companion pairing differs from the template's antipodes".into()));
    }
    let domain = AntipodalDomain::new(companion.involution, companion.representation)?;
    let paired = PairedClass::new(domain, read_class(class_path)?)?;
    Ok(Disambiguation { paired, template })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::delta_ant;
    use crate::concept::{family_class, Family};
    use crate::extremal::{collapse_certificate, cubical_complex, DEFAULT_COLLAPSE_BUDGET};
    use crate::spheres::{barycentric_witness, crosspolytope_witness};

    #[test]
    fn class_round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let c3 = family_class(Family::Cube, 3, None).unwrap();
        let p = dir.path().join("c3.json");
        store(&c3, &p).unwrap();
        assert_eq!(load::<ConceptClass>(&p).unwrap(), c3);
        assert_eq!(read_class(&p).unwrap(), c3);
        let t = dir.path().join("c3.txt");
        write_class_text(&c3, &t).unwrap();
        assert_eq!(read_class(&t).unwrap(), c3);
    }

    #[test]
    fn witness_round_trip() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let w = crosspolytope_witness(&c2, &[0, 1]).unwrap();
        let s = to_json(&w).unwrap();
        let back: SphereWitness = from_json(&s).unwrap();
        assert_eq!(back, w);
        assert!(back.verify().ok());
        assert_eq!(to_json(&back).unwrap(), s);
        let u3 = family_class(Family::Universal, 3, None).unwrap();
        let w = barycentric_witness(&u3, &[0, 1, 2]).unwrap();
        assert_eq!(from_json::<SphereWitness>(&to_json(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn complexes() {
        let a = delta_ant(&family_class(Family::Cube, 2, None).unwrap()).unwrap();
        assert_eq!(from_json::<AntipodalComplex>(&to_json(&a).unwrap()).unwrap(), a);
        let overlapping = json!({
            "vertices": ["(0,+)", "(1,+)", "(2,+)"],
            "maximal": [[0, 1, 2], [0, 1]],
        });
        let env = serde_json::to_string(&SchemaEnvelope::new(Kind::Complex, overlapping)).unwrap();
        assert!(from_json::<SimplicialComplex>(&env).is_err());
    }

    #[test]
    fn envelope_checks() {
        let c = family_class(Family::Cube, 1, None).unwrap();
        let s = to_json(&c).unwrap();
        assert!(matches!(from_json::<SphereWitness>(&s), Err(Error::Schema(_))));
        let future = s.replace("\"1.0\"", "\"2.0\"");
        assert!(matches!(from_json::<ConceptClass>(&future), Err(Error::Schema(_))));
        let unknown = s.replace("\"class\"", "\"mystery\"");
        assert!(matches!(from_json::<ConceptClass>(&unknown), Err(Error::Schema(_))));
        // Keys come out sorted.
        let k = s.find("\"kind\"").unwrap();
        let p = s.find("\"payload\"").unwrap();
        let v = s.find("\"schema_version\"").unwrap();
        assert!(k < p && p < v);
    }

    #[test]
    fn cubical_round_trip() {
        let cc = cubical_complex(&family_class(Family::Cube, 2, None).unwrap()).unwrap();
        let collapse = collapse_certificate(&cc, DEFAULT_COLLAPSE_BUDGET).unwrap();
        let a = CubicalArtifact { complex: cc, collapse };
        assert_eq!(from_json::<CubicalArtifact>(&to_json(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn disambiguation_round_trip() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let w = crosspolytope_witness(&c2, &[0, 1]).unwrap();
        let d = crate::disamb::pullback_disambiguation(&w, &c2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (cp, jp) = (dir.path().join("d.txt"), dir.path().join("d.json"));
        store_disambiguation(&d, &cp, &jp).unwrap();
        let back = load_disambiguation(&cp, &jp).unwrap();
        assert_eq!(back, d);
        assert_eq!(crate::disamb::check_disambiguates(&back).unwrap(), None);
    }

    #[test]
    fn representation_round_trip() {
        let r = crate::signrank::universal_representation(2);
        assert_eq!(from_json::<SignRepresentation>(&to_json(&r).unwrap()).unwrap(), r);
    }
}
