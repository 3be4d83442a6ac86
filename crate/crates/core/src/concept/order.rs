use super::ConceptClass;
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Default budget on `|X_b|^|X_a| * |H_b|^|H_a|` for [`search_class_leq`].
pub const CLASS_LEQ_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLeqWitness {
    pub phi: Vec<usize>,
    pub sigma: Vec<usize>,
}

/// Checks `sigma(h)(phi(x)) = h(x)` for all hypotheses `h` and points `x` of `a`.
pub fn verify_class_leq(a: &ConceptClass, b: &ConceptClass, phi: &[usize], sigma: &[usize]) -> Result<bool> {
    a.require_total()?;
    b.require_total()?;
    if phi.len() != a.domain_size() || sigma.len() != a.len() {
        return Err(Error::DomainMismatch(format!(
            "maps have lengths {} and {}, expected {} and {}",
            phi.len(),
            sigma.len(),
            a.domain_size(),
            a.len()
        )));
    }
    for &y in phi {
        if y >= b.domain_size() {
            return Err(Error::IndexOutOfRange {
                what: "target domain",
                index: y,
                len: b.domain_size(),
            });
        }
    }
    for &g in sigma {
        if g >= b.len() {
            return Err(Error::IndexOutOfRange {
                what: "target hypothesis",
                index: g,
                len: b.len(),
            });
        }
    }
    Ok(a.hypotheses().iter().zip(sigma).all(|(h, &g)| {
        let g = b.hypothesis(g);
        (0..a.domain_size()).all(|x| h.is_plus(x) == g.is_plus(phi[x]))
    }))
}

fn log_budget_ok(a: &ConceptClass, b: &ConceptClass, budget: u64) -> bool {
    let l = a.domain_size() as f64 * (b.domain_size().max(1) as f64).ln()
        + a.len() as f64 * (b.len() as f64).ln();
    l <= (budget as f64).ln() + 1e-9
}

/// Backtracking over `sigma`. Once `sigma` is fixed on a prefix of the
/// hypotheses, every point `x` of `a` keeps the set of points `y` of `b` whose
/// column agrees with `x` on that prefix; an empty set prunes the branch.
pub fn search_class_leq(a: &ConceptClass, b: &ConceptClass, budget: u64) -> Result<Option<ClassLeqWitness>> {
    a.require_total()?;
    b.require_total()?;
    if !log_budget_ok(a, b, budget) {
        return Err(Error::BudgetExceeded {
            what: "class order search",
            budget,
        });
    }
    let nb = b.domain_size();
    let b_rows: Vec<&BitSet> = b.hypotheses().iter().map(|h| h.value_mask()).collect();
    let all = BitSet::full(nb);
    let mut cand: Vec<Vec<BitSet>> = vec![vec![all; a.domain_size()]];
    let mut sigma: Vec<usize> = Vec::with_capacity(a.len());
    let mut choice: Vec<usize> = vec![0];
    let mut steps: u64 = 0;
    loop {
        let depth = sigma.len();
        if depth == a.len() {
            let phi = cand[depth]
                .iter()
                .map(|c| c.first().expect("nonempty candidate set"))
                .collect::<Vec<_>>();
            debug_assert!(verify_class_leq(a, b, &phi, &sigma).unwrap_or(false));
            return Ok(Some(ClassLeqWitness { phi, sigma }));
        }
        let g = choice[depth];
        if g >= b.len() {
            choice.pop();
            if sigma.pop().is_none() {
                return Ok(None);
            }
            cand.pop();
            *choice.last_mut().expect("parent frame") += 1;
            continue;
        }
        steps += 1;
        if steps > budget {
            return Err(Error::BudgetExceeded {
                what: "class order search",
                budget,
            });
        }
        let h = a.hypothesis(depth);
        let row = b_rows[g];
        let neg = row.complement();
        let mut next = Vec::with_capacity(a.domain_size());
        let mut ok = true;
        for (x, c) in cand[depth].iter().enumerate() {
            let c = c.intersection(if h.is_plus(x) { row } else { &neg });
            if c.is_empty() {
                ok = false;
                break;
            }
            next.push(c);
        }
        if ok {
            sigma.push(g);
            cand.push(next);
            choice.push(0);
        } else {
            choice[depth] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, parse_class, Family};

    #[test]
    fn verify_identity_and_inclusion() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        assert!(verify_class_leq(&c2, &c2, &[0, 1], &[0, 1, 2, 3]).unwrap());
        let t2 = family_class(Family::Threshold, 2, None).unwrap();
        let t3 = family_class(Family::Threshold, 3, None).unwrap();
        assert!(verify_class_leq(&t2, &t3, &[0, 1], &[0, 1, 2]).unwrap());
        assert!(verify_class_leq(&t2, &t3, &[0, 1], &[0, 1, 9]).is_err());
    }

    #[test]
    fn cube_not_below_singleton() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let one = parse_class("+").unwrap();
        assert!(!verify_class_leq(&c2, &one, &[0, 0], &[0, 0, 0, 0]).unwrap());
        assert_eq!(search_class_leq(&c2, &one, CLASS_LEQ_BUDGET).unwrap(), None);
    }

    #[test]
    fn search_examples() {
        let t2 = family_class(Family::Threshold, 2, None).unwrap();
        let t3 = family_class(Family::Threshold, 3, None).unwrap();
        let w = search_class_leq(&t2, &t3, CLASS_LEQ_BUDGET).unwrap().unwrap();
        assert!(verify_class_leq(&t2, &t3, &w.phi, &w.sigma).unwrap());
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        assert_eq!(search_class_leq(&c2, &t3, CLASS_LEQ_BUDGET).unwrap(), None);
        let one = parse_class("-+").unwrap();
        assert!(search_class_leq(&one, &t3, CLASS_LEQ_BUDGET).unwrap().is_some());
    }

    #[test]
    fn budget_is_distinct_from_absence() {
        let c4 = family_class(Family::Cube, 4, None).unwrap();
        let e = search_class_leq(&c4, &c4, CLASS_LEQ_BUDGET).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { .. }));
    }
}
