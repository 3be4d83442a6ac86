use std::collections::HashSet;

use serde::Serialize;

use super::CubicalComplex;
use crate::bitset::BitSet;
use crate::concept::PartialHypothesis;
use crate::error::{check_cap, Error, Result};

pub const DEFAULT_COLLAPSE_BUDGET: u64 = 1_000_000;
pub const MAX_COLLAPSE_CUBES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseOutcome {
    /// Elementary collapses as `(free_face, coface)` pairs, in order.
    pub steps: Vec<(PartialHypothesis, PartialHypothesis)>,
    pub nodes: u64,
}

struct Search<'a> {
    cc: &'a CubicalComplex,
    cofaces: Vec<Vec<usize>>,
    seen: HashSet<BitSet>,
    nodes: u64,
    budget: u64,
    steps: Vec<(usize, usize)>,
}

impl Search<'_> {
    /// Free pairs in the current complex, highest coface dimension first.
    fn moves(&self, alive: &BitSet) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = alive
            .iter()
            .filter_map(|f| {
                let mut up = self.cofaces[f].iter().filter(|&&c| alive.contains(c));
                match (up.next(), up.next()) {
                    (Some(&c), None) => Some((f, c)),
                    _ => None,
                }
            })
            .collect();
        out.sort_by_key(|&(f, c)| (std::cmp::Reverse(self.cc.cubes()[c].dim()), f));
        out
    }

    fn run(&mut self, alive: &mut BitSet) -> Result<bool> {
        if alive.count() == 1 {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                what: "collapse search nodes",
                budget: self.budget,
            });
        }
        if !self.seen.insert(alive.clone()) {
            return Ok(false);
        }
        for (f, c) in self.moves(alive) {
            alive.remove(f);
            alive.remove(c);
            self.steps.push((f, c));
            if self.run(alive)? {
                return Ok(true);
            }
            self.steps.pop();
            alive.insert(f);
            alive.insert(c);
        }
        Ok(false)
    }
}

/// Searches for a sequence of elementary collapses down to one vertex.
/// `Ok(None)` means the search space was exhausted without success.
pub fn collapse_certificate(cc: &CubicalComplex, budget: u64) -> Result<Option<CollapseOutcome>> {
    let m = cc.cubes().len();
    check_cap("cube count for collapse search", m as u64, MAX_COLLAPSE_CUBES as u64)?;
    let mut search = Search {
        cc,
        cofaces: (0..m).map(|i| cc.coface_indices(i)).collect(),
        seen: HashSet::new(),
        nodes: 0,
        budget,
        steps: Vec::new(),
    };
    let mut alive = BitSet::full(m);
    if !search.run(&mut alive)? {
        return Ok(None);
    }
    Ok(Some(CollapseOutcome {
        steps: search
            .steps
            .iter()
            .map(|&(f, c)| (cc.cubes()[f].clone(), cc.cubes()[c].clone()))
            .collect(),
        nodes: search.nodes,
    }))
}

impl CollapseOutcome {
    /// Replays the steps, checking each face is free when removed.
    pub fn verify(&self, cc: &CubicalComplex) -> bool {
        let mut alive = BitSet::full(cc.cubes().len());
        for (f, c) in &self.steps {
            let (Some(fi), Some(ci)) = (cc.index_of(f), cc.index_of(c)) else {
                return false;
            };
            if !alive.contains(fi) || !alive.contains(ci) {
                return false;
            }
            let up: Vec<usize> = cc.coface_indices(fi).into_iter().filter(|&j| alive.contains(j)).collect();
            if up != [ci] {
                return false;
            }
            alive.remove(fi);
            alive.remove(ci);
        }
        alive.count() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, parse_class, Family};
    use crate::extremal::cubical_complex;

    #[test]
    fn square_collapses() {
        let cc = cubical_complex(&family_class(Family::Cube, 2, None).unwrap()).unwrap();
        let out = collapse_certificate(&cc, DEFAULT_COLLAPSE_BUDGET).unwrap().unwrap();
        assert_eq!(out.steps.len(), 4);
        assert!(out.verify(&cc));
    }

    #[test]
    fn figure_class_collapses() {
        let cc = cubical_complex(&parse_class("---\n-+-\n++-\n+--\n--+").unwrap()).unwrap();
        let out = collapse_certificate(&cc, DEFAULT_COLLAPSE_BUDGET).unwrap().unwrap();
        assert!(out.verify(&cc));
        let c3 = cubical_complex(&family_class(Family::Cube, 3, None).unwrap()).unwrap();
        assert!(collapse_certificate(&c3, DEFAULT_COLLAPSE_BUDGET).unwrap().unwrap().verify(&c3));
    }

    #[test]
    fn hollow_cycle_does_not_collapse() {
        let cycle: Vec<PartialHypothesis> = ["--", "-+", "+-", "++", "*-", "*+", "-*", "+*"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let cc = CubicalComplex::from_cubes(2, cycle).unwrap();
        assert_eq!(collapse_certificate(&cc, DEFAULT_COLLAPSE_BUDGET).unwrap(), None);
    }

    #[test]
    fn budget_is_distinct_from_failure() {
        let cc = cubical_complex(&family_class(Family::Cube, 3, None).unwrap()).unwrap();
        assert!(collapse_certificate(&cc, 1).unwrap_err().is_budget());
    }
}
