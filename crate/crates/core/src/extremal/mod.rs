//! Extremal classes, cubical complexes and the low-VC classification.

mod classify;
mod collapse;
mod cubical;

use serde::Serialize;

use crate::concept::{dimension, shattered_sets, ConceptClass, DimensionVariant, PartialHypothesis};
use crate::error::{check_cap, Error, Result};

pub use classify::{classify_low_vc, threshold_certificate_holds, LowVcClassification};
pub use collapse::{collapse_certificate, CollapseOutcome, DEFAULT_COLLAPSE_BUDGET, MAX_COLLAPSE_CUBES};
pub use cubical::{
    cubical_barycentric, cubical_complex, full_subcomplex_embedding_check, CubicalComplex, EmbeddingCase,
    EmbeddingReport, MAX_CUBES,
};

/// Default cap on the domain size for exact shattered-set counting.
pub const EXTREMAL_DOMAIN_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub size: usize,
    pub shattered: usize,
    pub extremal: bool,
}

/// Counts shattered sets and compares with the class size.
pub fn is_extremal(class: &ConceptClass) -> Result<ExtremalReport> {
    check_cap("domain size for extremality", class.domain_size() as u64, EXTREMAL_DOMAIN_CAP as u64)?;
    let sets = shattered_sets(class, None)?.expect("no early stop requested");
    Ok(ExtremalReport {
        size: class.len(),
        shattered: sets.len(),
        extremal: sets.len() == class.len(),
    })
}

/// Extremality without a domain cap: the enumeration stops as soon as the
/// number of shattered sets exceeds the class size.
pub fn is_extremal_bounded(class: &ConceptClass) -> Result<bool> {
    Ok(matches!(shattered_sets(class, Some(class.len()))?, Some(s) if s.len() == class.len()))
}

/// All concepts extending `h`.
pub fn restriction(class: &ConceptClass, h: &PartialHypothesis) -> Result<ConceptClass> {
    class.require_total()?;
    if h.len() != class.domain_size() {
        return Err(Error::DomainMismatch(format!(
            "partial hypothesis has length {}, class domain has {} points",
            h.len(),
            class.domain_size()
        )));
    }
    let hyps: Vec<PartialHypothesis> = class.hypotheses().iter().filter(|g| g.extends(h)).cloned().collect();
    if hyps.is_empty() {
        return Err(Error::Precondition(format!("{h} is not realizable by the class")));
    }
    ConceptClass::new(class.domain_size(), hyps)
}

/// `VC(candidate)` when the candidate is an extremal superclass on the same domain.
pub fn vc_extremal_upper(class: &ConceptClass, candidate: &ConceptClass) -> Result<Option<usize>> {
    if class.domain_size() != candidate.domain_size() {
        return Err(Error::DomainMismatch(format!(
            "class has {} points, candidate has {}",
            class.domain_size(),
            candidate.domain_size()
        )));
    }
    if !class.hypotheses().iter().all(|h| candidate.contains(h)) {
        return Ok(None);
    }
    if !is_extremal_bounded(candidate)? {
        return Ok(None);
    }
    Ok(Some(dimension(candidate, DimensionVariant::Primal)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, parse_class, Family};

    #[test]
    fn pajor_equality_examples() {
        let e = parse_class("---\n--+\n-++\n+++").unwrap();
        assert_eq!(
            is_extremal(&e).unwrap(),
            ExtremalReport {
                size: 4,
                shattered: 4,
                extremal: true
            }
        );
        assert!(is_extremal(&family_class(Family::Cube, 4, None).unwrap()).unwrap().extremal);
        let r = is_extremal(&parse_class("+-\n-+").unwrap()).unwrap();
        assert_eq!((r.size, r.shattered, r.extremal), (2, 3, false));
        assert!(!is_extremal_bounded(&parse_class("+-\n-+").unwrap()).unwrap());
        let u = family_class(Family::Universal, 5, None).unwrap();
        assert!(is_extremal(&u).unwrap_err().is_budget());
        assert!(!is_extremal_bounded(&u).unwrap());
    }

    #[test]
    fn restrictions() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let r = restriction(&c2, &"*-".parse().unwrap()).unwrap();
        assert_eq!(r.sorted_rows(), vec!["+-", "--"]);
        assert_eq!(restriction(&c2, &"**".parse().unwrap()).unwrap(), c2);
        let t = parse_class("--\n+-").unwrap();
        assert!(restriction(&t, &"*+".parse().unwrap()).is_err());
    }

    #[test]
    fn extremal_upper_candidates() {
        let t2 = family_class(Family::Threshold, 2, None).unwrap();
        let sub = parse_class("--\n+-").unwrap();
        assert_eq!(vc_extremal_upper(&sub, &t2).unwrap(), Some(1));
        let c3 = family_class(Family::Cube, 3, None).unwrap();
        let any = parse_class("+-+\n-+-").unwrap();
        assert_eq!(vc_extremal_upper(&any, &c3).unwrap(), Some(3));
        let bad = parse_class("+-+\n-+-\n++-").unwrap();
        assert_eq!(vc_extremal_upper(&any, &bad).unwrap(), None);
        assert!(vc_extremal_upper(&any, &t2).is_err());
    }
}
