//! Abstract simplicial complexes stored by their maximal simplices.

mod iso;
mod label;
mod ops;
mod realizable;

use std::collections::{BTreeSet, HashMap};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub use iso::{antipodal_isomorphism, complexes_isomorphic, DEFAULT_ISO_VERTEX_CAP};
pub use label::VertexLabel;
pub use ops::{barycentric_subdivision, faces, face_counts, join_complex, FACE_CAP};
pub use realizable::{antipodal_subcomplex, delta_ant, realizable_complex, RealizableComplex, PAIR_CAP};

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<VertexLabel>,
    maximal: Vec<BitSet>,
    index: HashMap<VertexLabel, usize>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.maximal == other.maximal
    }
}

impl Eq for SimplicialComplex {}

fn build_index(vertices: &[VertexLabel]) -> Result<HashMap<VertexLabel, usize>> {
    let mut index = HashMap::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        if index.insert(v.clone(), i).is_some() {
            return Err(Error::InvalidComplex(format!("duplicate vertex label {v}")));
        }
    }
    Ok(index)
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            maximal: Vec::new(),
            index: HashMap::new(),
            incidence: Vec::new(),
        }
    }

    /// Builds from simplices that are already known to be pairwise incomparable.
    pub(crate) fn from_maximal_trusted(vertices: Vec<VertexLabel>, mut maximal: Vec<BitSet>) -> Self {
        maximal.sort();
        maximal.dedup();
        let index = build_index(&vertices).expect("distinct labels");
        let incidence = incidence(vertices.len(), &maximal);
        debug_assert!(incidence.iter().all(|l| !l.is_empty()), "uncovered vertex");
        SimplicialComplex {
            vertices,
            maximal,
            index,
            incidence,
        }
    }

    /// Validating constructor: the simplices must be nonempty, pairwise
    /// inclusion-incomparable and together cover every vertex.
    pub fn from_maximal(vertices: Vec<VertexLabel>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len();
        let index = build_index(&vertices)?;
        let mut maximal = Vec::with_capacity(simplices.len());
        for s in &simplices {
            if s.is_empty() {
                return Err(Error::InvalidComplex("empty maximal simplex".into()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    what: "vertex",
                    index: v,
                    len: n,
                });
            }
            maximal.push(BitSet::from_indices(n, s.iter().copied()));
        }
        maximal.sort();
        if maximal.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidComplex("repeated maximal simplex".into()));
        }
        let inc = incidence(n, &maximal);
        for (i, s) in maximal.iter().enumerate() {
            if let Some(j) = superset_among(&maximal, &inc, s, Some(i)) {
                return Err(Error::InvalidComplex(format!(
                    "maximal simplex {:?} is contained in {:?}",
                    s.to_vec(),
                    maximal[j].to_vec()
                )));
            }
        }
        if let Some(v) = inc.iter().position(|l| l.is_empty()) {
            return Err(Error::InvalidComplex(format!(
                "vertex {} lies in no simplex",
                vertices[v]
            )));
        }
        Ok(SimplicialComplex {
            vertices,
            maximal,
            index,
            incidence: inc,
        })
    }

    /// Keeps the inclusion-maximal members of an arbitrary simplex list and
    /// drops vertices that end up uncovered.
    pub fn from_simplices(vertices: Vec<VertexLabel>, simplices: Vec<BitSet>) -> Self {
        let n = vertices.len();
        let mut cands: Vec<BitSet> = simplices.into_iter().filter(|s| !s.is_empty()).collect();
        cands.sort_by(|a, b| b.count().cmp(&a.count()).then_with(|| a.cmp(b)));
        cands.dedup();
        let mut kept: Vec<BitSet> = Vec::new();
        let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in cands {
            let v = s.first().expect("nonempty");
            if inc[v].iter().any(|&j| s.is_subset(&kept[j])) {
                continue;
            }
            for u in s.iter() {
                inc[u].push(kept.len());
            }
            kept.push(s);
        }
        let used: Vec<usize> = (0..n).filter(|&v| !inc[v].is_empty()).collect();
        if used.len() == n {
            return SimplicialComplex::from_maximal_trusted(vertices, kept);
        }
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in used.iter().enumerate() {
            remap[old] = new;
        }
        let verts = used.iter().map(|&v| vertices[v].clone()).collect();
        let kept = kept
            .iter()
            .map(|s| BitSet::from_indices(used.len(), s.iter().map(|v| remap[v])))
            .collect();
        SimplicialComplex::from_maximal_trusted(verts, kept)
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn maximal_simplices(&self) -> &[BitSet] {
        &self.maximal
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// Dimension, with `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.maximal.iter().map(|s| s.count() as isize - 1).max().unwrap_or(-1)
    }

    pub fn index_of(&self, label: &VertexLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Indices of the maximal simplices containing vertex `v`.
    pub fn star(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn contains_simplex(&self, s: &BitSet) -> bool {
        match s.first() {
            None => true,
            Some(v) if v >= self.vertices.len() => false,
            Some(_) => superset_among(&self.maximal, &self.incidence, s, None).is_some(),
        }
    }

    pub fn contains_indices(&self, s: &[usize]) -> bool {
        if s.iter().any(|&v| v >= self.vertices.len()) {
            return false;
        }
        self.contains_simplex(&BitSet::from_indices(self.vertices.len(), s.iter().copied()))
    }

    /// Maximal simplices as sets of labels; equal iff the complexes agree up to vertex order.
    pub fn labelled_simplices(&self) -> BTreeSet<Vec<VertexLabel>> {
        self.maximal
            .iter()
            .map(|s| {
                let mut v: Vec<VertexLabel> = s.iter().map(|i| self.vertices[i].clone()).collect();
                v.sort();
                v
            })
            .collect()
    }

    pub fn relabel<F: Fn(&VertexLabel) -> VertexLabel>(&self, f: F) -> Result<SimplicialComplex> {
        let vertices: Vec<VertexLabel> = self.vertices.iter().map(f).collect();
        build_index(&vertices)?;
        Ok(SimplicialComplex::from_maximal_trusted(vertices, self.maximal.clone()))
    }

    /// Connected components of the 1-skeleton, each a sorted vertex list.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &j in &self.incidence[v] {
                    for u in self.maximal[j].iter() {
                        if comp[u] == usize::MAX {
                            comp[u] = id;
                            stack.push(u);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

fn incidence(n: usize, maximal: &[BitSet]) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n];
    for (j, s) in maximal.iter().enumerate() {
        for v in s.iter() {
            inc[v].push(j);
        }
    }
    inc
}

fn superset_among(maximal: &[BitSet], inc: &[Vec<usize>], s: &BitSet, skip: Option<usize>) -> Option<usize> {
    let v = s
        .iter()
        .min_by_key(|&v| inc[v].len())
        .expect("nonempty simplex");
    inc[v]
        .iter()
        .copied()
        .find(|&j| Some(j) != skip && s.is_subset(&maximal[j]))
}

/// A complex with a free simplicial involution on its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntipodalComplex {
    complex: SimplicialComplex,
    involution: Vec<usize>,
}

impl AntipodalComplex {
    /// Checks that `involution` is an involution, maps simplices to simplices
    /// and never meets a simplex in both a vertex and its image.
    pub fn new(complex: SimplicialComplex, involution: Vec<usize>) -> Result<Self> {
        let n = complex.vertex_count();
        if involution.len() != n {
            return Err(Error::InvalidComplex(format!(
                "involution has length {}, expected {n}",
                involution.len()
            )));
        }
        for (v, &w) in involution.iter().enumerate() {
            if w >= n || involution[w] != v {
                return Err(Error::InvalidComplex(format!("vertex {v} is not paired consistently")));
            }
        }
        for s in complex.maximal_simplices() {
            let img = BitSet::from_indices(n, s.iter().map(|v| involution[v]));
            if !complex.contains_simplex(&img) {
                return Err(Error::InvalidComplex(format!(
                    "image of simplex {:?} is not a simplex",
                    s.to_vec()
                )));
            }
            if img.intersects(s) {
                return Err(Error::InvalidComplex(format!(
                    "simplex {:?} contains a vertex and its antipode",
                    s.to_vec()
                )));
            }
        }
        Ok(AntipodalComplex { complex, involution })
    }

    pub fn empty() -> Self {
        AntipodalComplex {
            complex: SimplicialComplex::empty(),
            involution: Vec::new(),
        }
    }

    /// Skips validation. Intended for loading certificates that are verified
    /// afterwards, and for building deliberately broken inputs.
    pub fn from_parts_unchecked(complex: SimplicialComplex, involution: Vec<usize>) -> Self {
        AntipodalComplex { complex, involution }
    }

    pub(crate) fn new_trusted(complex: SimplicialComplex, involution: Vec<usize>) -> Self {
        debug_assert!(AntipodalComplex::new(complex.clone(), involution.clone()).is_ok());
        AntipodalComplex { complex, involution }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn antipode(&self, v: usize) -> usize {
        self.involution[v]
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.complex.dim()
    }

    pub fn vertex_count(&self) -> usize {
        self.complex.vertex_count()
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        self.complex.vertices()
    }

    pub fn maximal_simplices(&self) -> &[BitSet] {
        self.complex.maximal_simplices()
    }

    pub fn index_of(&self, l: &VertexLabel) -> Option<usize> {
        self.complex.index_of(l)
    }

    pub fn into_parts(self) -> (SimplicialComplex, Vec<usize>) {
        (self.complex, self.involution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::Sign;

    fn pts(n: usize) -> Vec<VertexLabel> {
        (0..n).map(|i| VertexLabel::Subset(vec![i])).collect()
    }

    #[test]
    fn validating_constructor() {
        assert!(SimplicialComplex::from_maximal(pts(3), vec![vec![0, 1], vec![1, 2]]).is_ok());
        assert!(SimplicialComplex::from_maximal(pts(3), vec![vec![0, 1], vec![1]]).is_err());
        assert!(SimplicialComplex::from_maximal(pts(3), vec![vec![0, 1]]).is_err());
        assert!(SimplicialComplex::from_maximal(pts(2), vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(SimplicialComplex::from_maximal(pts(2), vec![vec![0, 5]]).is_err());
    }

    #[test]
    fn reduction_to_maximal() {
        let s = |v: &[usize]| BitSet::from_indices(4, v.iter().copied());
        let k = SimplicialComplex::from_simplices(pts(4), vec![s(&[0, 1]), s(&[0]), s(&[0, 1, 2]), s(&[])]);
        assert_eq!(k.vertex_count(), 3);
        assert_eq!(k.maximal_simplices().len(), 1);
        assert_eq!(k.dim(), 2);
        assert!(k.contains_indices(&[0, 2]));
        assert!(!k.contains_indices(&[0, 3]));
    }

    #[test]
    fn antipodal_axioms() {
        let v = vec![
            VertexLabel::CrossPole { i: 0, y: Sign::Minus },
            VertexLabel::CrossPole { i: 0, y: Sign::Plus },
        ];
        let k = SimplicialComplex::from_maximal(v.clone(), vec![vec![0], vec![1]]).unwrap();
        assert!(AntipodalComplex::new(k, vec![1, 0]).is_ok());
        let bad = SimplicialComplex::from_maximal(v, vec![vec![0, 1]]).unwrap();
        assert!(AntipodalComplex::new(bad.clone(), vec![1, 0]).is_err());
        assert!(AntipodalComplex::new(bad, vec![0, 0]).is_err());
    }

    #[test]
    fn empty_complex_dimension() {
        assert_eq!(SimplicialComplex::empty().dim(), -1);
        assert!(AntipodalComplex::empty().is_empty());
    }
}
