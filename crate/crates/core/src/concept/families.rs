use std::fmt;
use std::str::FromStr;

use super::{ConceptClass, PartialHypothesis};
use crate::bitset::BitSet;
use crate::error::{check_cap, Error, Result};

pub const MAX_CUBE_N: usize = 20;
/// Cap on the domain size `2^n` of the universal classes.
pub const MAX_UNIVERSAL_DOMAIN: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// All `2^n` sign vectors of length `n`, in lexicographic order with `- < +`.
    Cube,
    /// `n` indicator functions on the `2^n` subsets of `[n]`; point `S` is the bitmask of `S`.
    Universal,
    /// The universal class together with the constant concepts.
    UniversalPlus,
    /// `d + 1` thresholds on `d` points: `h_i` is `+` on the first `i` points.
    Threshold,
    /// Indicators of all subsets of size at most `d` of a ground set of size `extra` (default `d + 1`).
    SubsetsLeq,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Cube,
        Family::Universal,
        Family::UniversalPlus,
        Family::Threshold,
        Family::SubsetsLeq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cube => "cube",
            Family::Universal => "universal",
            Family::UniversalPlus => "universal_plus",
            Family::Threshold => "threshold",
            Family::SubsetsLeq => "subsets_leq",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        let norm = s.replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| Error::Precondition(format!("unknown family {s:?}")))
    }
}

pub fn family_class(family: Family, n: usize, extra: Option<usize>) -> Result<ConceptClass> {
    if n == 0 {
        return Err(Error::Precondition("family parameter must be at least 1".into()));
    }
    match family {
        Family::Cube => {
            check_cap("cube dimension", n as u64, MAX_CUBE_N as u64)?;
            let hyps = (0..1usize << n)
                .map(|t| {
                    PartialHypothesis::total(
                        n,
                        &BitSet::from_indices(n, (0..n).filter(|i| t >> (n - 1 - i) & 1 == 1)),
                    )
                })
                .collect();
            ConceptClass::new(n, hyps)
        }
        Family::Universal | Family::UniversalPlus => {
            let domain = 1u64.checked_shl(n as u32).filter(|_| n < 63).unwrap_or(u64::MAX);
            check_cap("universal domain", domain, MAX_UNIVERSAL_DOMAIN as u64)?;
            let size = domain as usize;
            let mut hyps: Vec<PartialHypothesis> = (0..n)
                .map(|i| {
                    PartialHypothesis::total(
                        size,
                        &BitSet::from_indices(size, (0..size).filter(|s| s >> i & 1 == 1)),
                    )
                })
                .collect();
            if family == Family::UniversalPlus {
                hyps.push(PartialHypothesis::total(size, &BitSet::new(size)));
                hyps.push(PartialHypothesis::total(size, &BitSet::full(size)));
            }
            // For n = 1 the indicator and the all-plus concept coincide.
            ConceptClass::new_dedup(size, hyps)
        }
        Family::Threshold => {
            let hyps = (0..=n)
                .map(|i| PartialHypothesis::total(n, &BitSet::from_indices(n, 0..i)))
                .collect();
            ConceptClass::new(n, hyps)
        }
        Family::SubsetsLeq => {
            let ground = extra.unwrap_or(n + 1);
            if ground < n {
                return Err(Error::Precondition(format!(
                    "ground set size {ground} is smaller than the subset bound {n}"
                )));
            }
            check_cap("subsets_leq ground set", ground as u64, MAX_CUBE_N as u64)?;
            let mut hyps = Vec::new();
            for k in 0..=n {
                for s in super::Combinations::new(ground, k) {
                    hyps.push(PartialHypothesis::total(ground, &BitSet::from_indices(ground, s)));
                }
            }
            ConceptClass::new(ground, hyps)
        }
    }
}
