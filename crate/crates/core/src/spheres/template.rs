use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::complex::{AntipodalComplex, SimplicialComplex, VertexLabel, FACE_CAP};
use crate::concept::{next_permutation, Sign};
use crate::error::{check_cap, Result};

/// Largest crosspolytope dimension that will be materialized.
pub const MAX_CROSSPOLYTOPE_DIM: usize = 20;
/// Largest barycentric boundary dimension that will be materialized (`(n+2)!` chains).
pub const MAX_BARYCENTRIC_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    Crosspolytope(usize),
    BarycentricBoundary(usize),
    Join(Vec<TemplateKind>),
    Subdivided { base: Box<TemplateKind>, depth: usize },
}

impl TemplateKind {
    pub fn dim(&self) -> isize {
        match self {
            TemplateKind::Crosspolytope(n) | TemplateKind::BarycentricBoundary(n) => *n as isize,
            TemplateKind::Join(parts) => parts.iter().map(|p| p.dim() + 1).sum::<isize>() - 1,
            TemplateKind::Subdivided { base, .. } => base.dim(),
        }
    }

    /// Canonical complex of this kind.
    pub fn build(&self) -> Result<AntipodalComplex> {
        match self {
            TemplateKind::Crosspolytope(n) => crosspolytope(*n),
            TemplateKind::BarycentricBoundary(n) => barycentric_boundary(*n),
            TemplateKind::Join(parts) => {
                let mut it = parts.iter();
                let first = it
                    .next()
                    .ok_or_else(|| crate::Error::Precondition("join of no templates".into()))?
                    .build()?;
                it.try_fold(first, |acc, p| Ok(acc.join(&p.build()?)))
            }
            TemplateKind::Subdivided { base, depth } => {
                let mut k = base.build()?;
                for _ in 0..*depth {
                    k = k.barycentric()?;
                }
                Ok(k)
            }
        }
    }
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateKind::Crosspolytope(n) => write!(f, "D_{n}"),
            TemplateKind::BarycentricBoundary(n) => write!(f, "B^{n}"),
            TemplateKind::Join(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            TemplateKind::Subdivided { base, depth } => write!(f, "sd^{depth}({base})"),
        }
    }
}

/// Boundary of the `(n+1)`-dimensional crosspolytope: vertices `[i,±]` for
/// `i <= n`, simplices the sign-consistent sets.
pub fn crosspolytope(n: usize) -> Result<AntipodalComplex> {
    check_cap("crosspolytope dimension", n as u64, MAX_CROSSPOLYTOPE_DIM as u64)?;
    let m = n + 1;
    let vertices: Vec<VertexLabel> = (0..m)
        .flat_map(|i| [Sign::Minus, Sign::Plus].map(|y| VertexLabel::CrossPole { i, y }))
        .collect();
    let maximal = (0..1usize << m)
        .map(|t| BitSet::from_indices(2 * m, (0..m).map(|i| 2 * i + (t >> (m - 1 - i) & 1))))
        .collect();
    let inv = (0..2 * m).map(|v| v ^ 1).collect();
    Ok(AntipodalComplex::new_trusted(
        SimplicialComplex::from_maximal_trusted(vertices, maximal),
        inv,
    ))
}

/// Chains of nontrivial subsets of `[n+2]`, with complementation.
pub fn barycentric_boundary(n: usize) -> Result<AntipodalComplex> {
    check_cap("barycentric boundary dimension", n as u64, MAX_BARYCENTRIC_DIM as u64)?;
    let g = n + 2;
    let full = (1usize << g) - 1;
    let mut masks: Vec<usize> = (1..full).collect();
    masks.sort_by_key(|&s| (s.count_ones(), (0..g).filter(|i| s >> i & 1 == 1).collect::<Vec<_>>()));
    let mut pos = vec![usize::MAX; full + 1];
    for (i, &s) in masks.iter().enumerate() {
        pos[s] = i;
    }
    let vertices = masks
        .iter()
        .map(|&s| VertexLabel::Subset((0..g).filter(|i| s >> i & 1 == 1).collect()))
        .collect();
    let count = (1..=g as u64).product::<u64>();
    check_cap("barycentric boundary chains", count, FACE_CAP)?;
    let mut maximal = Vec::with_capacity(count as usize);
    let mut perm: Vec<usize> = (0..g).collect();
    loop {
        let mut prefix = 0usize;
        let mut chain = BitSet::new(masks.len());
        for &p in &perm[..g - 1] {
            prefix |= 1 << p;
            chain.insert(pos[prefix]);
        }
        maximal.push(chain);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let inv = masks.iter().map(|&s| pos[full & !s]).collect();
    Ok(AntipodalComplex::new_trusted(
        SimplicialComplex::from_maximal_trusted(vertices, maximal),
        inv,
    ))
}

/// A certified sphere: the complex must equal the canonical build of `kind`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereTemplate {
    pub kind: TemplateKind,
    pub complex: AntipodalComplex,
}

impl SphereTemplate {
    pub fn new(kind: TemplateKind) -> Result<Self> {
        let complex = kind.build()?;
        Ok(SphereTemplate { kind, complex })
    }

    pub fn dim(&self) -> isize {
        self.kind.dim()
    }

    /// Compares against a fresh canonical build. Returns a description of the
    /// first discrepancy and the offending simplex, if any.
    pub fn check(&self) -> Option<(String, Option<Vec<usize>>)> {
        let canon = match self.kind.build() {
            Ok(c) => c,
            Err(e) => return Some((format!("template kind {} cannot be built: {e}", self.kind), None)),
        };
        if canon.vertices() != self.complex.vertices() {
            return Some((format!("vertex list differs from canonical {}", self.kind), None));
        }
        let have: std::collections::HashSet<&BitSet> = self.complex.maximal_simplices().iter().collect();
        if let Some(s) = canon.maximal_simplices().iter().find(|s| !have.contains(s)) {
            return Some((format!("maximal simplex missing from {}", self.kind), Some(s.to_vec())));
        }
        let want: std::collections::HashSet<&BitSet> = canon.maximal_simplices().iter().collect();
        if let Some(s) = self.complex.maximal_simplices().iter().find(|s| !want.contains(s)) {
            return Some((format!("unexpected maximal simplex in {}", self.kind), Some(s.to_vec())));
        }
        if canon.involution() != self.complex.involution() {
            let v = (0..canon.vertex_count())
                .find(|&v| canon.antipode(v) != self.complex.antipode(v))
                .expect("differs somewhere");
            return Some((format!("involution differs at vertex {v}"), Some(vec![v])));
        }
        None
    }
}
