use std::collections::{HashMap, HashSet};

use super::{AntipodalComplex, SimplicialComplex, VertexLabel};
use crate::bitset::BitSet;
use crate::concept::next_permutation;
use crate::error::{check_cap, Result};

/// Explosion guard for explicit face enumeration.
pub const FACE_CAP: u64 = 10_000_000;

fn pow2_sum(k: &SimplicialComplex) -> u64 {
    k.maximal_simplices()
        .iter()
        .map(|s| 1u64.checked_shl(s.count() as u32).unwrap_or(u64::MAX))
        .fold(0u64, |a, b| a.saturating_add(b))
}

/// All nonempty faces, deduplicated, ordered by size then lexicographically.
pub fn faces(k: &SimplicialComplex, cap: u64) -> Result<Vec<BitSet>> {
    if k.maximal_simplices().iter().any(|s| s.count() > 40) {
        return Err(crate::Error::CapExceeded {
            what: "simplex size for face enumeration",
            limit: 40,
            actual: k.maximal_simplices().iter().map(|s| s.count()).max().unwrap_or(0) as u64,
        });
    }
    let mut seen: HashSet<BitSet> = HashSet::new();
    let n = k.vertex_count();
    for s in k.maximal_simplices() {
        let members = s.to_vec();
        let size = members.len();
        for mask in 1u64..(1u64 << size) {
            let f = BitSet::from_indices(n, (0..size).filter(|i| mask >> i & 1 == 1).map(|i| members[i]));
            seen.insert(f);
            check_cap("face count", seen.len() as u64, cap)?;
        }
    }
    let mut out: Vec<BitSet> = seen.into_iter().collect();
    out.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Number of simplices of each dimension `0..=dim`.
pub fn face_counts(k: &SimplicialComplex, cap: u64) -> Result<Vec<u64>> {
    let fs = faces(k, cap)?;
    let mut counts = vec![0u64; (k.dim() + 1).max(0) as usize];
    for f in fs {
        counts[f.count() - 1] += 1;
    }
    Ok(counts)
}

/// Vertices are the nonempty faces; maximal simplices are the complete flags
/// inside each maximal simplex.
fn subdivide(k: &SimplicialComplex, cap: u64) -> Result<(SimplicialComplex, Vec<BitSet>, HashMap<BitSet, usize>)> {
    let flag_count = k
        .maximal_simplices()
        .iter()
        .map(|s| (1..=s.count() as u64).fold(1u64, |a, b| a.saturating_mul(b)))
        .fold(0u64, |a, b| a.saturating_add(b));
    check_cap("subdivision simplex count", flag_count, cap)?;
    check_cap("subdivision face count", pow2_sum(k), cap.saturating_mul(4))?;
    let fs = faces(k, cap)?;
    let id: HashMap<BitSet, usize> = fs.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let labels: Vec<VertexLabel> = fs
        .iter()
        .map(|f| {
            let mut v: Vec<VertexLabel> = f.iter().map(|i| k.vertices()[i].clone()).collect();
            v.sort();
            VertexLabel::ChainNode(v)
        })
        .collect();
    let n = k.vertex_count();
    let mut maximal = Vec::with_capacity(flag_count as usize);
    for s in k.maximal_simplices() {
        let members = s.to_vec();
        let mut perm: Vec<usize> = (0..members.len()).collect();
        loop {
            let mut prefix = BitSet::new(n);
            let mut chain = BitSet::new(fs.len());
            for &p in &perm {
                prefix.insert(members[p]);
                chain.insert(id[&prefix]);
            }
            maximal.push(chain);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    Ok((SimplicialComplex::from_maximal_trusted(labels, maximal), fs, id))
}

pub fn barycentric_subdivision(k: &SimplicialComplex, cap: u64) -> Result<SimplicialComplex> {
    Ok(subdivide(k, cap)?.0)
}

impl SimplicialComplex {
    pub fn barycentric(&self) -> Result<SimplicialComplex> {
        barycentric_subdivision(self, FACE_CAP)
    }
}

impl AntipodalComplex {
    /// Subdivision with the involution acting facewise.
    pub fn barycentric(&self) -> Result<AntipodalComplex> {
        let (sub, fs, id) = subdivide(self.complex(), FACE_CAP)?;
        let n = self.vertex_count();
        let inv = fs
            .iter()
            .map(|f| id[&BitSet::from_indices(n, f.iter().map(|v| self.antipode(v)))])
            .collect();
        Ok(AntipodalComplex::new_trusted(sub, inv))
    }

    pub fn join(&self, other: &AntipodalComplex) -> AntipodalComplex {
        let k = join_complex(self.complex(), other.complex());
        let na = self.vertex_count();
        let inv = if self.is_empty() {
            other.involution().to_vec()
        } else if other.is_empty() {
            self.involution().to_vec()
        } else {
            self.involution()
                .iter()
                .copied()
                .chain(other.involution().iter().map(|v| v + na))
                .collect()
        };
        AntipodalComplex::new_trusted(k, inv)
    }
}

/// Vertices are tagged with their factor (`t0:` or `t1:`); maximal simplices
/// are the pairwise unions. Joining with the empty complex returns the other
/// factor, still tagged.
pub fn join_complex(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let tag = |side: usize, k: &SimplicialComplex| -> Vec<VertexLabel> {
        k.vertices().iter().map(|v| VertexLabel::tagged(side, v.clone())).collect()
    };
    if b.is_empty() {
        return SimplicialComplex::from_maximal_trusted(tag(0, a), a.maximal_simplices().to_vec());
    }
    if a.is_empty() {
        return SimplicialComplex::from_maximal_trusted(tag(1, b), b.maximal_simplices().to_vec());
    }
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    let mut vertices = tag(0, a);
    vertices.extend(tag(1, b));
    let mut maximal = Vec::with_capacity(a.maximal_simplices().len() * b.maximal_simplices().len());
    for s in a.maximal_simplices() {
        for t in b.maximal_simplices() {
            maximal.push(BitSet::from_indices(na + nb, s.iter().chain(t.iter().map(|v| v + na))));
        }
    }
    SimplicialComplex::from_maximal_trusted(vertices, maximal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::Sign;

    fn simplex(n: usize) -> SimplicialComplex {
        let v = (0..n).map(|i| VertexLabel::Subset(vec![i])).collect();
        SimplicialComplex::from_maximal(v, vec![(0..n).collect()]).unwrap()
    }

    fn boundary_of_triangle() -> SimplicialComplex {
        let v = (0..3).map(|i| VertexLabel::Subset(vec![i])).collect();
        SimplicialComplex::from_maximal(v, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    #[test]
    fn face_counts_of_simplex() {
        assert_eq!(face_counts(&simplex(3), FACE_CAP).unwrap(), vec![3, 3, 1]);
        assert_eq!(face_counts(&SimplicialComplex::empty(), FACE_CAP).unwrap(), Vec::<u64>::new());
        assert!(face_counts(&simplex(10), 100).unwrap_err().is_budget());
    }

    #[test]
    fn triangle_boundary_subdivides_to_hexagon() {
        let h = barycentric_subdivision(&boundary_of_triangle(), FACE_CAP).unwrap();
        assert_eq!(face_counts(&h, FACE_CAP).unwrap(), vec![6, 6]);
        assert_eq!(h.components().len(), 1);
        assert!(h.maximal_simplices().iter().all(|s| s.count() == 2));
    }

    #[test]
    fn edge_subdivides_to_path() {
        let p = barycentric_subdivision(&simplex(2), FACE_CAP).unwrap();
        assert_eq!(face_counts(&p, FACE_CAP).unwrap(), vec![3, 2]);
    }

    #[test]
    fn cone_over_vertex() {
        let v = SimplicialComplex::from_maximal(vec![VertexLabel::Subset(vec![9])], vec![vec![0]]).unwrap();
        let k = boundary_of_triangle();
        let c = join_complex(&k, &v);
        assert_eq!(c.maximal_simplices().len(), 3);
        assert!(c.maximal_simplices().iter().all(|s| s.contains(3)));
        assert_eq!(face_counts(&c, FACE_CAP).unwrap(), vec![4, 6, 3]);
    }

    #[test]
    fn join_of_two_point_spheres_is_square() {
        let v = vec![
            VertexLabel::CrossPole { i: 0, y: Sign::Minus },
            VertexLabel::CrossPole { i: 0, y: Sign::Plus },
        ];
        let d0 = AntipodalComplex::new(SimplicialComplex::from_maximal(v, vec![vec![0], vec![1]]).unwrap(), vec![1, 0]).unwrap();
        let d1 = d0.join(&d0);
        assert!(AntipodalComplex::new(d1.complex().clone(), d1.involution().to_vec()).is_ok());
        assert_eq!(face_counts(d1.complex(), FACE_CAP).unwrap(), vec![4, 4]);
        let sub = d1.barycentric().unwrap();
        assert_eq!(face_counts(sub.complex(), FACE_CAP).unwrap(), vec![8, 8]);
        assert!(AntipodalComplex::new(sub.complex().clone(), sub.involution().to_vec()).is_ok());
    }
}
