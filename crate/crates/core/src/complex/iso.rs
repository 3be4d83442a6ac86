use std::collections::HashSet;

use super::{AntipodalComplex, SimplicialComplex};
use crate::bitset::BitSet;
use crate::error::{check_cap, Result};

pub const DEFAULT_ISO_VERTEX_CAP: usize = 64;

struct Side<'a> {
    k: &'a SimplicialComplex,
    adj: Vec<BitSet>,
    sig: Vec<Vec<usize>>,
    inv: Option<&'a [usize]>,
}

impl<'a> Side<'a> {
    fn new(k: &'a SimplicialComplex, inv: Option<&'a [usize]>) -> Self {
        let n = k.vertex_count();
        let mut adj = vec![BitSet::new(n); n];
        for s in k.maximal_simplices() {
            for v in s.iter() {
                adj[v].union_with(s);
            }
        }
        for (v, a) in adj.iter_mut().enumerate() {
            a.remove(v);
        }
        let sig = (0..n)
            .map(|v| {
                let mut sizes: Vec<usize> = k.star(v).iter().map(|&j| k.maximal_simplices()[j].count()).collect();
                sizes.sort_unstable();
                sizes.push(usize::MAX);
                sizes.push(adj[v].count());
                sizes
            })
            .collect();
        Side { k, adj, sig, inv }
    }
}

struct Search<'a> {
    a: Side<'a>,
    b: Side<'a>,
    b_max: HashSet<BitSet>,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn compatible(&self, v: usize, w: usize) -> bool {
        if self.used[w] || self.a.sig[v] != self.b.sig[w] {
            return false;
        }
        self.a.adj[v].iter().all(|u| match self.map[u] {
            Some(fu) => self.b.adj[w].contains(fu),
            None => true,
        }) && self
            .map
            .iter()
            .enumerate()
            .all(|(u, fu)| fu.is_none_or(|fu| self.a.adj[v].contains(u) == self.b.adj[w].contains(fu)))
    }

    fn stars_ok(&self, v: usize) -> bool {
        let nb = self.b.k.vertex_count();
        self.a.k.star(v).iter().all(|&j| {
            let s = &self.a.k.maximal_simplices()[j];
            let img: Option<Vec<usize>> = s.iter().map(|u| self.map[u]).collect();
            img.is_none_or(|img| self.b_max.contains(&BitSet::from_indices(nb, img)))
        })
    }

    fn assign(&mut self, v: usize, w: usize) -> Vec<usize> {
        let mut done = vec![v];
        self.map[v] = Some(w);
        self.used[w] = true;
        if let (Some(ia), Some(ib)) = (self.a.inv, self.b.inv) {
            let (v2, w2) = (ia[v], ib[w]);
            if v2 != v && self.map[v2].is_none() {
                self.map[v2] = Some(w2);
                self.used[w2] = true;
                done.push(v2);
            }
        }
        done
    }

    fn undo(&mut self, done: &[usize]) {
        for &v in done {
            let w = self.map[v].take().expect("assigned");
            self.used[w] = false;
        }
    }

    fn run(&mut self, pos: usize) -> bool {
        let Some(&v) = self.order[pos..].iter().find(|&&v| self.map[v].is_none()) else {
            return true;
        };
        let next = self.order.iter().position(|&u| u == v).expect("in order");
        for w in 0..self.b.k.vertex_count() {
            if !self.compatible(v, w) {
                continue;
            }
            if let (Some(ia), Some(ib)) = (self.a.inv, self.b.inv) {
                let (v2, w2) = (ia[v], ib[w]);
                if v2 != v && (w2 == w || !self.compatible(v2, w2)) {
                    continue;
                }
                // Adjacency between v and its partner must match too.
                if self.a.adj[v].contains(v2) != self.b.adj[w].contains(w2) {
                    continue;
                }
            }
            let done = self.assign(v, w);
            if done.iter().all(|&u| self.stars_ok(u)) && self.run(next + 1) {
                return true;
            }
            self.undo(&done);
        }
        false
    }
}

fn bfs_order(k: &SimplicialComplex, adj: &[BitSet]) -> Vec<usize> {
    let n = k.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for u in adj[v].iter() {
                if !seen[u] {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
    }
    order
}

fn find(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    inv: Option<(&[usize], &[usize])>,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    check_cap("isomorphism vertex count", a.vertex_count().max(b.vertex_count()) as u64, cap as u64)?;
    if a.vertex_count() != b.vertex_count() || a.maximal_simplices().len() != b.maximal_simplices().len() {
        return Ok(None);
    }
    let sizes = |k: &SimplicialComplex| {
        let mut v: Vec<usize> = k.maximal_simplices().iter().map(|s| s.count()).collect();
        v.sort_unstable();
        v
    };
    if sizes(a) != sizes(b) {
        return Ok(None);
    }
    let sa = Side::new(a, inv.map(|p| p.0));
    let sb = Side::new(b, inv.map(|p| p.1));
    let mut ssa: Vec<_> = sa.sig.clone();
    let mut ssb: Vec<_> = sb.sig.clone();
    ssa.sort();
    ssb.sort();
    if ssa != ssb {
        return Ok(None);
    }
    let order = bfs_order(a, &sa.adj);
    let n = a.vertex_count();
    let mut search = Search {
        b_max: b.maximal_simplices().iter().cloned().collect(),
        a: sa,
        b: sb,
        order,
        map: vec![None; n],
        used: vec![false; n],
    };
    if search.run(0) {
        Ok(Some(search.map.into_iter().map(|w| w.expect("complete")).collect()))
    } else {
        Ok(None)
    }
}

/// A vertex bijection carrying maximal simplices onto maximal simplices.
pub fn complexes_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex, cap: usize) -> Result<Option<Vec<usize>>> {
    find(a, b, None, cap)
}

/// As [`complexes_isomorphic`], additionally commuting with the involutions.
pub fn antipodal_isomorphism(a: &AntipodalComplex, b: &AntipodalComplex, cap: usize) -> Result<Option<Vec<usize>>> {
    find(a.complex(), b.complex(), Some((a.involution(), b.involution())), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{delta_ant, VertexLabel};
    use crate::concept::{family_class, Family, Sign};

    fn cycle(n: usize) -> SimplicialComplex {
        let v = (0..n).map(|i| VertexLabel::Subset(vec![i])).collect();
        SimplicialComplex::from_maximal(v, (0..n).map(|i| vec![i, (i + 1) % n]).collect()).unwrap()
    }

    fn check(a: &SimplicialComplex, b: &SimplicialComplex, f: &[usize]) {
        let got: HashSet<BitSet> = a
            .maximal_simplices()
            .iter()
            .map(|s| BitSet::from_indices(b.vertex_count(), s.iter().map(|v| f[v])))
            .collect();
        let want: HashSet<BitSet> = b.maximal_simplices().iter().cloned().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn hexagon_vs_square() {
        assert_eq!(complexes_isomorphic(&cycle(6), &cycle(4), 64).unwrap(), None);
        let f = complexes_isomorphic(&cycle(6), &cycle(6), 64).unwrap().unwrap();
        check(&cycle(6), &cycle(6), &f);
    }

    #[test]
    fn cube_two_matches_square_crosspolytope() {
        let a = delta_ant(&family_class(Family::Cube, 2, None).unwrap()).unwrap();
        let v: Vec<VertexLabel> = (0..2)
            .flat_map(|i| [Sign::Minus, Sign::Plus].map(|y| VertexLabel::CrossPole { i, y }))
            .collect();
        let k = SimplicialComplex::from_maximal(v, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]).unwrap();
        let d1 = AntipodalComplex::new(k, vec![1, 0, 3, 2]).unwrap();
        let f = antipodal_isomorphism(&a, &d1, 64).unwrap().unwrap();
        check(a.complex(), d1.complex(), &f);
        for v in 0..4 {
            assert_eq!(f[a.antipode(v)], d1.antipode(f[v]));
        }
    }

    #[test]
    fn involution_can_rule_out_isomorphism() {
        // Two squares; antipodes inside each square versus across the squares.
        let v = (0..8).map(|i| VertexLabel::Subset(vec![i])).collect();
        let edges = (0..2)
            .flat_map(|c| (0..4).map(move |i| vec![4 * c + i, 4 * c + (i + 1) % 4]))
            .collect();
        let k = SimplicialComplex::from_maximal(v, edges).unwrap();
        let inside = AntipodalComplex::new(k.clone(), vec![2, 3, 0, 1, 6, 7, 4, 5]).unwrap();
        let across = AntipodalComplex::new(k.clone(), vec![4, 5, 6, 7, 0, 1, 2, 3]).unwrap();
        assert!(complexes_isomorphic(&k, &k, 64).unwrap().is_some());
        assert!(antipodal_isomorphism(&inside, &inside, 64).unwrap().is_some());
        assert!(antipodal_isomorphism(&inside, &across, 64).unwrap().is_none());
        assert!(complexes_isomorphic(&cycle(70), &cycle(70), 64).unwrap_err().is_budget());
    }
}
