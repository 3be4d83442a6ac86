use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dual_class, ConceptClass};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionVariant {
    Primal,
    Dual,
    PrimalAntipodal,
    DualAntipodal,
}

impl DimensionVariant {
    pub const ALL: [DimensionVariant; 4] = [
        DimensionVariant::Primal,
        DimensionVariant::Dual,
        DimensionVariant::PrimalAntipodal,
        DimensionVariant::DualAntipodal,
    ];

    pub fn is_dual(self) -> bool {
        matches!(self, DimensionVariant::Dual | DimensionVariant::DualAntipodal)
    }

    pub fn is_antipodal(self) -> bool {
        matches!(
            self,
            DimensionVariant::PrimalAntipodal | DimensionVariant::DualAntipodal
        )
    }

    pub fn symbol(self) -> &'static str {
        match self {
            DimensionVariant::Primal => "VC",
            DimensionVariant::Dual => "VC*",
            DimensionVariant::PrimalAntipodal => "VC^a",
            DimensionVariant::DualAntipodal => "VC*a",
        }
    }
}

fn check_indices(class: &ConceptClass, s: &[usize]) -> Result<()> {
    for &x in s {
        if x >= class.domain_size() {
            return Err(Error::IndexOutOfRange {
                what: "domain",
                index: x,
                len: class.domain_size(),
            });
        }
    }
    Ok(())
}

/// Pattern of each hypothesis on `s`, bit `i` standing for `s[i]`.
fn patterns(cols: &[BitSet], m: usize, s: &[usize]) -> Vec<u64> {
    let mut pats = vec![0u64; m];
    for (i, &x) in s.iter().enumerate() {
        for j in cols[x].iter() {
            pats[j] |= 1 << i;
        }
    }
    pats
}

fn all_patterns(pats: &[u64], k: usize) -> bool {
    if k >= 63 || pats.len() < (1usize << k) {
        return false;
    }
    let mut seen = BitSet::new(1 << k);
    let mut count = 0;
    for &p in pats {
        if !seen.contains(p as usize) {
            seen.insert(p as usize);
            count += 1;
        }
    }
    count == 1 << k
}

fn all_patterns_up_to_sign(pats: &[u64], k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if k >= 63 || pats.len() < (1usize << (k - 1)) {
        return false;
    }
    let mask = (1u64 << k) - 1;
    let mut seen = BitSet::new(1 << (k - 1));
    let mut count = 0;
    for &p in pats {
        // The representative of {p, -p} is the one with the top bit clear.
        let c = if p >> (k - 1) & 1 == 1 { !p & mask } else { p };
        if !seen.contains(c as usize) {
            seen.insert(c as usize);
            count += 1;
        }
    }
    count == 1 << (k - 1)
}

pub fn shatters(class: &ConceptClass, s: &[usize]) -> Result<bool> {
    class.require_total()?;
    check_indices(class, s)?;
    let cols = class.columns();
    Ok(all_patterns(&patterns(&cols, class.len(), s), s.len()))
}

pub fn antipodally_shatters(class: &ConceptClass, s: &[usize]) -> Result<bool> {
    class.require_total()?;
    check_indices(class, s)?;
    let cols = class.columns();
    Ok(all_patterns_up_to_sign(&patterns(&cols, class.len(), s), s.len()))
}

/// Some partial hypothesis with free set exactly `s` has its whole cube in the class.
pub fn strongly_shatters(class: &ConceptClass, s: &[usize]) -> Result<bool> {
    class.require_total()?;
    check_indices(class, s)?;
    let k = s.len();
    if k >= 63 || class.len() < 1 << k {
        return Ok(false);
    }
    let free = BitSet::from_indices(class.domain_size(), s.iter().copied());
    let mut groups: HashMap<BitSet, usize> = HashMap::new();
    for h in class.hypotheses() {
        let c = groups.entry(h.value_mask().difference(&free)).or_insert(0);
        *c += 1;
        // Distinct hypotheses with one key carry distinct patterns on `s`.
        if *c == 1 << k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Lexicographic k-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            cur: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

const BATCH: usize = 2048;

/// First k-subset in lexicographic order accepted by `pred`. Batches are
/// scanned in parallel, and `find_first` keeps the answer independent of the
/// number of workers.
fn first_subset<F>(n: usize, k: usize, pred: F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let mut it = Combinations::new(n, k);
    loop {
        let batch: Vec<Vec<usize>> = it.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return None;
        }
        if let Some(s) = batch.into_par_iter().find_first(|s| pred(s)) {
            return Some(s);
        }
    }
}

fn floor_log2(m: usize) -> usize {
    (usize::BITS - 1 - m.leading_zeros()) as usize
}

fn primal_largest(class: &ConceptClass, antipodal: bool) -> Vec<usize> {
    let n = class.domain_size();
    let m = class.len();
    let cols = class.columns();
    let bound = floor_log2(m) + usize::from(antipodal);
    let bound = bound.min(n);
    let mut best = Vec::new();
    // Shattered sets are downward closed, so the first size with no witness ends the search.
    for k in 1..=bound {
        let found = first_subset(n, k, |s| {
            let pats = patterns(&cols, m, s);
            if antipodal {
                all_patterns_up_to_sign(&pats, k)
            } else {
                all_patterns(&pats, k)
            }
        });
        match found {
            Some(s) => best = s,
            None => break,
        }
    }
    best
}

/// Lexicographically least shattered set of maximum size. For dual variants
/// the indices refer to hypotheses of `class`.
pub fn largest_shattered_set(class: &ConceptClass, variant: DimensionVariant) -> Result<Vec<usize>> {
    class.require_total()?;
    Ok(match variant {
        DimensionVariant::Primal => primal_largest(class, false),
        DimensionVariant::PrimalAntipodal => primal_largest(class, true),
        DimensionVariant::Dual => primal_largest(&dual_class(class)?.class, false),
        DimensionVariant::DualAntipodal => primal_largest(&dual_class(class)?.class, true),
    })
}

pub fn dimension(class: &ConceptClass, variant: DimensionVariant) -> Result<usize> {
    Ok(largest_shattered_set(class, variant)?.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    pub vc: usize,
    pub vc_dual: usize,
    pub vc_antipodal: usize,
    pub vc_dual_antipodal: usize,
}

impl Dimensions {
    pub fn get(&self, v: DimensionVariant) -> usize {
        match v {
            DimensionVariant::Primal => self.vc,
            DimensionVariant::Dual => self.vc_dual,
            DimensionVariant::PrimalAntipodal => self.vc_antipodal,
            DimensionVariant::DualAntipodal => self.vc_dual_antipodal,
        }
    }
}

pub fn dimensions(class: &ConceptClass) -> Result<Dimensions> {
    class.require_total()?;
    let dual = dual_class(class)?.class;
    Ok(Dimensions {
        vc: primal_largest(class, false).len(),
        vc_dual: primal_largest(&dual, false).len(),
        vc_antipodal: primal_largest(class, true).len(),
        vc_dual_antipodal: primal_largest(&dual, true).len(),
    })
}

/// Level-wise enumeration of a downward-closed family of subsets.
/// Stops early and returns `None` once more than `stop_above` sets are found.
fn downward_closed<F>(n: usize, stop_above: Option<usize>, test: F) -> Option<Vec<BitSet>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let mut out = vec![BitSet::new(n)];
    let mut level: Vec<BitSet> = vec![BitSet::new(n)];
    let over = |len: usize| stop_above.is_some_and(|c| len > c);
    if over(out.len()) {
        return None;
    }
    while !level.is_empty() {
        let known: HashSet<&BitSet> = level.iter().collect();
        let mut candidates = Vec::new();
        for s in &level {
            let members = s.to_vec();
            let start = members.last().map_or(0, |&m| m + 1);
            for j in start..n {
                let mut t = s.clone();
                t.insert(j);
                let closed = members.iter().all(|&i| {
                    let mut u = t.clone();
                    u.remove(i);
                    known.contains(&u)
                });
                if closed {
                    candidates.push(t);
                }
            }
        }
        let next: Vec<BitSet> = candidates
            .into_par_iter()
            .filter(|t| test(&t.to_vec()))
            .collect();
        out.extend(next.iter().cloned());
        if over(out.len()) {
            return None;
        }
        level = next;
    }
    Some(out)
}

/// All shattered subsets, ordered by size then lexicographically.
pub fn shattered_sets(class: &ConceptClass, stop_above: Option<usize>) -> Result<Option<Vec<BitSet>>> {
    class.require_total()?;
    let cols = class.columns();
    let m = class.len();
    Ok(downward_closed(class.domain_size(), stop_above, |s| {
        all_patterns(&patterns(&cols, m, s), s.len())
    }))
}

pub fn strongly_shattered_sets(class: &ConceptClass) -> Result<Vec<BitSet>> {
    class.require_total()?;
    Ok(downward_closed(class.domain_size(), None, |s| {
        strongly_shatters(class, s).unwrap_or(false)
    })
    .unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, parse_class, Family};

    #[test]
    fn combinations_order() {
        let v: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], vec![0, 1]);
        assert_eq!(v[5], vec![2, 3]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn small_shattering() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        assert!(shatters(&c2, &[0, 1]).unwrap());
        assert!(shatters(&c2, &[]).unwrap());
        let t3 = family_class(Family::Threshold, 3, None).unwrap();
        assert!(!shatters(&t3, &[0, 1]).unwrap());
        assert!(shatters(&t3, &[1]).unwrap());
        assert!(matches!(shatters(&t3, &[5]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn antipodal_shattering_of_small_subsets_class() {
        let h = parse_class("--\n-+\n+-").unwrap();
        assert!(antipodally_shatters(&h, &[0, 1]).unwrap());
        assert!(!shatters(&h, &[0, 1]).unwrap());
        assert_eq!(dimension(&h, DimensionVariant::PrimalAntipodal).unwrap(), 2);
        assert_eq!(dimension(&h, DimensionVariant::Primal).unwrap(), 1);
    }

    #[test]
    fn strong_shattering_on_cube_complex_example() {
        let h = parse_class("---\n-+-\n++-\n+--\n--+").unwrap();
        assert!(strongly_shatters(&h, &[0, 1]).unwrap());
        assert!(strongly_shatters(&h, &[2]).unwrap());
        assert!(!strongly_shatters(&h, &[0, 2]).unwrap());
        assert!(strongly_shatters(&h, &[]).unwrap());
    }

    #[test]
    fn table_values_for_cubes_and_universal() {
        for n in 1..=5 {
            let c = family_class(Family::Cube, n, None).unwrap();
            let d = dimensions(&c).unwrap();
            assert_eq!(d.vc, n);
            assert_eq!(d.vc_dual, floor_log2(n));
            let u = family_class(Family::Universal, n, None).unwrap();
            let e = dimensions(&u).unwrap();
            assert_eq!(e.vc, floor_log2(n));
            assert_eq!(e.vc_dual, n);
        }
    }

    #[test]
    fn singleton_has_zero_dimension() {
        let h = parse_class("+-+").unwrap();
        assert_eq!(dimension(&h, DimensionVariant::Primal).unwrap(), 0);
        // Any single point is antipodally shattered, and the dual has two concepts.
        assert_eq!(dimension(&h, DimensionVariant::PrimalAntipodal).unwrap(), 1);
        assert_eq!(dimension(&h, DimensionVariant::Dual).unwrap(), 1);
        let c = parse_class("++").unwrap();
        assert_eq!(dimension(&c, DimensionVariant::Dual).unwrap(), 0);
        assert_eq!(dimension(&c, DimensionVariant::DualAntipodal).unwrap(), 1);
    }

    #[test]
    fn shattered_family_of_cube() {
        let c = family_class(Family::Cube, 3, None).unwrap();
        assert_eq!(shattered_sets(&c, None).unwrap().unwrap().len(), 8);
        assert!(shattered_sets(&c, Some(7)).unwrap().is_none());
        assert_eq!(strongly_shattered_sets(&c).unwrap().len(), 8);
    }
}
