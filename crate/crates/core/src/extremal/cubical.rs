use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::is_extremal;
use crate::bitset::BitSet;
use crate::complex::{SimplicialComplex, VertexLabel, FACE_CAP};
use crate::concept::{ConceptClass, Label, PartialHypothesis};
use crate::error::{check_cap, Error, Result};

/// Cap on the total number of cubes enumerated.
pub const MAX_CUBES: usize = 1 << 22;

/// A set of discrete cubes closed under taking faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalComplex {
    n: usize,
    cubes: Vec<PartialHypothesis>,
    index: HashMap<PartialHypothesis, usize>,
}

fn facets(c: &PartialHypothesis) -> impl Iterator<Item = PartialHypothesis> + '_ {
    (0..c.len()).filter(move |&j| c.get(j) == Label::Star).flat_map(move |j| {
        [Label::Minus, Label::Plus].map(|l| {
            let mut f = c.clone();
            f.set(j, l);
            f
        })
    })
}

impl CubicalComplex {
    fn from_sorted(n: usize, mut cubes: Vec<PartialHypothesis>) -> Self {
        cubes.sort();
        let index = cubes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        CubicalComplex { n, cubes, index }
    }

    /// Builds a complex from explicit cube labels, checking closure under faces.
    pub fn from_cubes(n: usize, cubes: Vec<PartialHypothesis>) -> Result<Self> {
        if cubes.is_empty() {
            return Err(Error::EmptyClass);
        }
        let set: HashSet<&PartialHypothesis> = cubes.iter().collect();
        if set.len() != cubes.len() {
            return Err(Error::InvalidComplex("duplicate cube label".into()));
        }
        for c in &cubes {
            if c.len() != n {
                return Err(Error::DomainMismatch(format!("cube {c} has length {}, expected {n}", c.len())));
            }
            if let Some(f) = facets(c).find(|f| !set.contains(f)) {
                return Err(Error::InvalidComplex(format!("face {f} of cube {c} is missing")));
            }
        }
        Ok(Self::from_sorted(n, cubes))
    }

    pub fn domain_size(&self) -> usize {
        self.n
    }

    /// Cubes sorted by dimension, then label.
    pub fn cubes(&self) -> &[PartialHypothesis] {
        &self.cubes
    }

    pub fn index_of(&self, c: &PartialHypothesis) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn contains(&self, c: &PartialHypothesis) -> bool {
        self.index.contains_key(c)
    }

    pub fn dim(&self) -> usize {
        self.cubes.last().map_or(0, |c| c.dim())
    }

    /// Number of cubes of each dimension.
    pub fn counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim() + 1];
        for c in &self.cubes {
            out[c.dim()] += 1;
        }
        out
    }

    /// The class of 0-cubes.
    pub fn class(&self) -> ConceptClass {
        let hyps = self.cubes.iter().take_while(|c| c.dim() == 0).cloned().collect();
        ConceptClass::new(self.n, hyps).expect("0-cubes form a valid class")
    }

    /// Indices of the codimension-one faces of cube `i`.
    pub fn facet_indices(&self, i: usize) -> Vec<usize> {
        facets(&self.cubes[i]).map(|f| self.index[&f]).collect()
    }

    /// Indices of the cubes having cube `i` as a codimension-one face.
    pub fn coface_indices(&self, i: usize) -> Vec<usize> {
        let c = &self.cubes[i];
        c.support()
            .iter()
            .filter_map(|j| {
                let mut g = c.clone();
                g.set(j, Label::Star);
                self.index.get(&g).copied()
            })
            .collect()
    }
}

/// All cubes `h` with every concept of `C(h)` in the class. A cube of
/// dimension `k+1` is present iff both of its facets across one free
/// coordinate are present, so cubes are built level by level.
pub fn cubical_complex(class: &ConceptClass) -> Result<CubicalComplex> {
    class.require_total()?;
    let n = class.domain_size();
    let mut all: Vec<PartialHypothesis> = class.hypotheses().to_vec();
    let mut level: HashSet<PartialHypothesis> = all.iter().cloned().collect();
    while !level.is_empty() {
        let cur: Vec<&PartialHypothesis> = level.iter().collect();
        let next: HashSet<PartialHypothesis> = cur
            .par_iter()
            .flat_map_iter(|c| {
                let level = &level;
                let first_free = (0..n).find(|&j| c.get(j) == Label::Star).unwrap_or(n);
                // Only lift coordinates below the first free one, so each cube
                // is generated from its lexicographically lowest-coordinate facet pair.
                (0..first_free)
                    .filter(move |&j| c.is_plus(j))
                    .filter_map(move |j| {
                        let mut other = (*c).clone();
                        other.set(j, Label::Minus);
                        level.contains(&other).then(|| {
                            let mut up = other;
                            up.set(j, Label::Star);
                            up
                        })
                    })
            })
            .collect();
        check_cap("cube count", (all.len() + next.len()) as u64, MAX_CUBES as u64)?;
        all.extend(next.iter().cloned());
        level = next;
    }
    Ok(CubicalComplex::from_sorted(n, all))
}

/// Order complex of the face poset: vertices are cubes, simplices are chains.
pub fn cubical_barycentric(cc: &CubicalComplex) -> Result<SimplicialComplex> {
    let m = cc.cubes.len();
    let has_coface: Vec<bool> = (0..m).map(|i| !cc.coface_indices(i).is_empty()).collect();
    let facet_lists: Vec<Vec<usize>> = (0..m).map(|i| cc.facet_indices(i)).collect();
    let mut total: u64 = 0;
    for (i, c) in cc.cubes.iter().enumerate() {
        if !has_coface[i] {
            let d = c.dim() as u64;
            total += (1..=d).product::<u64>() << d;
        }
    }
    check_cap("cubical barycentric chains", total, FACE_CAP)?;
    let mut maximal = Vec::with_capacity(total as usize);
    let mut stack = Vec::new();
    fn descend(i: usize, facets: &[Vec<usize>], m: usize, stack: &mut Vec<usize>, out: &mut Vec<BitSet>) {
        stack.push(i);
        if facets[i].is_empty() {
            out.push(BitSet::from_indices(m, stack.iter().copied()));
        } else {
            for &f in &facets[i] {
                descend(f, facets, m, stack, out);
            }
        }
        stack.pop();
    }
    for i in (0..m).filter(|&i| !has_coface[i]) {
        descend(i, &facet_lists, m, &mut stack, &mut maximal);
    }
    let vertices = cc.cubes.iter().cloned().map(VertexLabel::Cube).collect();
    Ok(SimplicialComplex::from_maximal_trusted(vertices, maximal))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingCase {
    /// The cube subdivision sits inside the subdivided complex of realizable distributions.
    CubesIntoDelta { full: bool },
    /// Full cube: every realizable partial hypothesis is a cube label.
    DeltaIntoCubes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub case: EmbeddingCase,
    pub cube_vertices: usize,
    pub delta_vertices: usize,
    /// First violated condition, if any.
    pub failure: Option<String>,
}

impl EmbeddingReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Nonempty-support partial hypotheses extended by some concept.
fn realizable_partials(class: &ConceptClass) -> Result<Vec<PartialHypothesis>> {
    let n = class.domain_size();
    check_cap(
        "realizable partial hypotheses",
        (class.len() as u64).saturating_mul(1u64.checked_shl(n as u32).unwrap_or(u64::MAX)),
        MAX_CUBES as u64,
    )?;
    let mut out = HashSet::new();
    for h in class.hypotheses() {
        for s in 1u64..(1u64 << n) {
            let defined = BitSet::from_indices(n, (0..n).filter(|&i| s >> i & 1 == 1));
            out.insert(PartialHypothesis::from_masks(h.value_mask().clone(), defined));
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    Ok(v)
}

/// Compares the barycentric subdivision of the cubical complex with the
/// subdivided complex of realizable distributions, whose vertices are
/// realizable nonempty-support partial hypotheses and whose simplices are
/// chains under extension. A cube label is read as the partial hypothesis
/// with the same string.
pub fn full_subcomplex_embedding_check(class: &ConceptClass) -> Result<EmbeddingReport> {
    if !is_extremal(class)?.extremal {
        return Err(Error::Precondition("class is not extremal".into()));
    }
    let n = class.domain_size();
    let cc = cubical_complex(class)?;
    let bary = cubical_barycentric(&cc)?;
    let delta = realizable_partials(class)?;
    let delta_set: HashSet<&PartialHypothesis> = delta.iter().collect();
    let comparable = |a: &PartialHypothesis, b: &PartialHypothesis| a.extends(b) || b.extends(a);

    if n > 0 && class.len() == 1usize << n {
        let failure = delta
            .iter()
            .find(|h| !cc.contains(h))
            .map(|h| format!("realizable {h} is not a cube"));
        return Ok(EmbeddingReport {
            case: EmbeddingCase::DeltaIntoCubes,
            cube_vertices: cc.cubes.len(),
            delta_vertices: delta.len(),
            failure,
        });
    }

    let mut failure = cc
        .cubes
        .iter()
        .find(|c| c.support().is_empty() || !delta_set.contains(c))
        .map(|c| format!("cube {c} is not a vertex of the realizable complex"));
    if failure.is_none() {
        failure = bary.maximal_simplices().iter().find_map(|s| {
            let v = s.to_vec();
            v.iter().enumerate().find_map(|(i, &a)| {
                v[i + 1..].iter().find_map(|&b| {
                    (!comparable(&cc.cubes[a], &cc.cubes[b]))
                        .then(|| format!("chain {} / {} is not a simplex", cc.cubes[a], cc.cubes[b]))
                })
            })
        });
    }
    // Both complexes are flag complexes, so fullness reduces to edges.
    let mut adjacent = vec![BitSet::new(cc.cubes.len()); cc.cubes.len()];
    for s in bary.maximal_simplices() {
        for v in s.iter() {
            adjacent[v].union_with(s);
        }
    }
    let mut full = true;
    'outer: for (a, adj) in adjacent.iter().enumerate() {
        for b in a + 1..cc.cubes.len() {
            if comparable(&cc.cubes[a], &cc.cubes[b]) && !adj.contains(b) {
                full = false;
                if failure.is_none() {
                    failure = Some(format!("{} and {} span a simplex outside the cubes", cc.cubes[a], cc.cubes[b]));
                }
                break 'outer;
            }
        }
    }
    Ok(EmbeddingReport {
        case: EmbeddingCase::CubesIntoDelta { full },
        cube_vertices: cc.cubes.len(),
        delta_vertices: delta.len(),
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::face_counts;
    use crate::concept::{family_class, parse_class, Family};

    fn figure_class() -> ConceptClass {
        parse_class("---\n-+-\n++-\n+--\n--+").unwrap()
    }

    #[test]
    fn figure_cube_counts() {
        let cc = cubical_complex(&figure_class()).unwrap();
        assert_eq!(cc.counts(), vec![5, 5, 1]);
        assert_eq!(cc.cubes().last().unwrap().to_string(), "**-");
        assert_eq!(cc.class().sorted_rows(), figure_class().sorted_rows());
    }

    #[test]
    fn small_cube_complexes() {
        let c2 = cubical_complex(&family_class(Family::Cube, 2, None).unwrap()).unwrap();
        assert_eq!(c2.counts(), vec![4, 4, 1]);
        let one = cubical_complex(&parse_class("+-+").unwrap()).unwrap();
        assert_eq!(one.counts(), vec![1]);
        let c4 = cubical_complex(&family_class(Family::Cube, 4, None).unwrap()).unwrap();
        // 3^4 faces of the 4-cube.
        assert_eq!(c4.cubes().len(), 81);
    }

    /// Counts chains in the face poset directly from the cube list.
    fn chain_counts(cc: &CubicalComplex) -> Vec<usize> {
        let cubes = cc.cubes();
        let below = |a: &PartialHypothesis, b: &PartialHypothesis| a != b && a.extends(b);
        let mut counts = vec![cubes.len(), 0, 0];
        for a in cubes {
            for b in cubes {
                if below(a, b) {
                    counts[1] += 1;
                    for c in cubes {
                        if below(b, c) {
                            counts[2] += 1;
                        }
                    }
                }
            }
        }
        counts
    }

    #[test]
    fn figure_barycentric_counts_match_chain_oracle() {
        let cc = cubical_complex(&figure_class()).unwrap();
        let b = cubical_barycentric(&cc).unwrap();
        let got = face_counts(&b, FACE_CAP).unwrap();
        assert_eq!(got, chain_counts(&cc).into_iter().map(|c| c as u64).collect::<Vec<_>>());
        assert_eq!(got, vec![11, 18, 8]);
    }

    #[test]
    fn barycentric_of_small_complexes() {
        let v = cubical_complex(&parse_class("-+").unwrap()).unwrap();
        assert_eq!(face_counts(&cubical_barycentric(&v).unwrap(), FACE_CAP).unwrap(), vec![1]);
        let e = cubical_complex(&parse_class("-+\n++").unwrap()).unwrap();
        let b = cubical_barycentric(&e).unwrap();
        assert_eq!(face_counts(&b, FACE_CAP).unwrap(), vec![3, 2]);
    }

    #[test]
    fn closure_is_validated() {
        let bad = CubicalComplex::from_cubes(2, vec!["*-".parse().unwrap(), "--".parse().unwrap()]);
        assert!(matches!(bad, Err(Error::InvalidComplex(_))));
        let cycle: Vec<PartialHypothesis> = ["--", "-+", "+-", "++", "*-", "*+", "-*", "+*"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let cc = CubicalComplex::from_cubes(2, cycle).unwrap();
        assert_eq!(cc.counts(), vec![4, 4]);
    }

    #[test]
    fn embedding_cases() {
        let e = parse_class("---\n--+\n-++\n+++").unwrap();
        let r = full_subcomplex_embedding_check(&e).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.case, EmbeddingCase::CubesIntoDelta { full: true });
        assert_eq!(r.cube_vertices, 7);
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let r = full_subcomplex_embedding_check(&c2).unwrap();
        assert_eq!(r.case, EmbeddingCase::DeltaIntoCubes);
        assert!(r.ok());
        assert!(full_subcomplex_embedding_check(&parse_class("+-\n-+").unwrap()).is_err());
    }
}
