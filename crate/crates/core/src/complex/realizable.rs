use super::{AntipodalComplex, SimplicialComplex, VertexLabel};
use crate::bitset::BitSet;
use crate::concept::{ConceptClass, Sign};
use crate::error::{check_cap, Result};

/// Cap on the number of hypothesis pairs examined when building the antipodal part.
pub const PAIR_CAP: u64 = 1 << 26;

/// The complex of concept graphs, with the label flip `(x,y) -> (x,-y)` kept
/// as a partial map since the flipped vertex need not occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizableComplex {
    pub complex: SimplicialComplex,
    pub antipode: Vec<Option<usize>>,
}

pub fn realizable_complex(class: &ConceptClass) -> Result<RealizableComplex> {
    class.require_total()?;
    let n = class.domain_size();
    let cols = class.columns();
    let m = class.len();
    // Vertex (x, y) exists iff some concept takes value y at x.
    let mut slot = vec![[None, None]; n];
    let mut vertices = Vec::new();
    for x in 0..n {
        let plus = cols[x].count();
        if plus < m {
            slot[x][0] = Some(vertices.len());
            vertices.push(VertexLabel::point(x, Sign::Minus));
        }
        if plus > 0 {
            slot[x][1] = Some(vertices.len());
            vertices.push(VertexLabel::point(x, Sign::Plus));
        }
    }
    let nv = vertices.len();
    let maximal = class
        .hypotheses()
        .iter()
        .map(|h| {
            BitSet::from_indices(
                nv,
                (0..n).map(|x| slot[x][usize::from(h.is_plus(x))].expect("occurring vertex")),
            )
        })
        .collect();
    let antipode = (0..n)
        .flat_map(|x| {
            let [a, b] = slot[x];
            [a.map(|_| b), b.map(|_| a)].into_iter().flatten()
        })
        .collect();
    Ok(RealizableComplex {
        complex: SimplicialComplex::from_maximal_trusted(vertices, maximal),
        antipode,
    })
}

/// The simplices `s` with both `s` and its flip `-s` in the complex. Maximal
/// ones are found among the sets `A ∩ -B` over pairs of maximal simplices.
pub fn antipodal_subcomplex(delta: &RealizableComplex) -> Result<AntipodalComplex> {
    let k = &delta.complex;
    let max = k.maximal_simplices();
    check_cap("hypothesis pairs", (max.len() as u64).pow(2), PAIR_CAP)?;
    let nv = k.vertex_count();
    let flipped: Vec<BitSet> = max
        .iter()
        .map(|b| BitSet::from_indices(nv, b.iter().filter_map(|v| delta.antipode[v])))
        .collect();
    let mut cands = Vec::new();
    for a in max {
        for fb in &flipped {
            let c = a.intersection(fb);
            if !c.is_empty() {
                cands.push(c);
            }
        }
    }
    let reduced = SimplicialComplex::from_simplices(k.vertices().to_vec(), cands);
    if reduced.is_empty() {
        return Ok(AntipodalComplex::empty());
    }
    let inv = reduced
        .vertices()
        .iter()
        .map(|l| {
            let (x, y) = l.as_point().expect("domain point label");
            reduced
                .index_of(&VertexLabel::point(x, -y))
                .expect("antipodal part is closed under the flip")
        })
        .collect();
    AntipodalComplex::new(reduced, inv)
}

pub fn delta_ant(class: &ConceptClass) -> Result<AntipodalComplex> {
    antipodal_subcomplex(&realizable_complex(class)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::face_counts;
    use crate::concept::{family_class, parse_class, Family};

    #[test]
    fn delta_h2_example() {
        let h = parse_class("---\n-+-\n+--\n++-").unwrap();
        let d = realizable_complex(&h).unwrap();
        assert_eq!(d.complex.vertex_count(), 5);
        assert_eq!(d.complex.maximal_simplices().len(), 4);
        assert!(d.complex.maximal_simplices().iter().all(|s| s.count() == 3));
        let a = antipodal_subcomplex(&d).unwrap();
        assert_eq!(face_counts(a.complex(), 100).unwrap(), vec![4, 4]);
        assert!(a
            .vertices()
            .iter()
            .all(|l| matches!(l.as_point(), Some((0 | 1, _)))));
    }

    #[test]
    fn cube_two_is_a_square() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let d = realizable_complex(&c2).unwrap();
        assert_eq!(face_counts(&d.complex, 100).unwrap(), vec![4, 4]);
        assert_eq!(delta_ant(&c2).unwrap().complex(), &d.complex);
    }

    #[test]
    fn singleton_and_thresholds() {
        let one = parse_class("+-+").unwrap();
        let d = realizable_complex(&one).unwrap();
        assert_eq!(d.complex.maximal_simplices().len(), 1);
        assert_eq!(d.complex.vertex_count(), 3);
        assert!(delta_ant(&one).unwrap().is_empty());
        for dd in 1..=5 {
            let t = family_class(Family::Threshold, dd, None).unwrap();
            let a = delta_ant(&t).unwrap();
            let comps = a.complex().components();
            assert_eq!(comps.len(), 2, "T_{dd}");
            let v = comps[0][0];
            assert!(comps[1].contains(&a.antipode(v)));
        }
    }
}
