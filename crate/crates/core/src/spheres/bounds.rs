use serde::Serialize;

use super::template::{MAX_BARYCENTRIC_DIM, MAX_CROSSPOLYTOPE_DIM};
use super::witness::{barycentric_witness, crosspolytope_witness, SphereWitness};
use crate::complex::delta_ant;
use crate::concept::{largest_shattered_set, ConceptClass, DimensionVariant};
use crate::error::{Error, Result};
use crate::extremal::{classify_low_vc, is_extremal_bounded, LowVcClassification};
use crate::signrank::{verify_representation, SignRepresentation};

#[derive(Clone, Debug, Default)]
pub struct SdOptions {
    /// Skip the hexagon lower bound for VC-1 classes that are not threshold-like.
    pub no_hexagon: bool,
    /// A sign-rank certificate; when it verifies, `d - 1` becomes an upper bound.
    pub sign_rank: Option<SignRepresentation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LowerSource {
    /// The antipodal complex is empty.
    EmptyComplex,
    Crosspolytope { set: Vec<usize> },
    Barycentric { hypotheses: Vec<usize> },
    Hexagon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum UpperSource {
    /// Coindex is at most the dimension of the antipodal complex.
    DimensionBound,
    Extremal { vc: usize },
    VcAtMostOne,
    ThresholdLike,
    EmptyComplex,
    SignRank { d: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: isize,
    pub source: LowerSource,
    #[serde(skip)]
    pub witness: Option<SphereWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpperBound {
    pub value: isize,
    pub source: UpperSource,
}

impl LowerSource {
    pub fn name(&self) -> &'static str {
        match self {
            LowerSource::EmptyComplex => "empty antipodal complex",
            LowerSource::Crosspolytope { .. } => "crosspolytope witness",
            LowerSource::Barycentric { .. } => "barycentric witness",
            LowerSource::Hexagon => "hexagon witness",
        }
    }
}

impl UpperSource {
    pub fn name(&self) -> &'static str {
        match self {
            UpperSource::DimensionBound => "dimension bound",
            UpperSource::Extremal { .. } => "extremal 2VC-1",
            UpperSource::VcAtMostOne => "VC <= 1",
            UpperSource::ThresholdLike => "threshold-like",
            UpperSource::EmptyComplex => "empty antipodal complex",
            UpperSource::SignRank { .. } => "sign-rank d-1",
        }
    }
}

/// All candidate bounds; `lower` and `upper` are the best of each list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SdBounds {
    pub lower: isize,
    pub upper: isize,
    pub lower_certificates: Vec<LowerBound>,
    pub upper_certificates: Vec<UpperBound>,
}

impl SdBounds {
    /// The certificate achieving the lower bound (first in list order on ties).
    pub fn best_lower(&self) -> &LowerBound {
        self.lower_certificates
            .iter()
            .find(|c| c.value == self.lower)
            .expect("lower is attained")
    }

    pub fn best_upper(&self) -> &UpperBound {
        self.upper_certificates
            .iter()
            .find(|c| c.value == self.upper)
            .expect("upper is attained")
    }
}

pub fn sd_bounds(class: &ConceptClass, opts: &SdOptions) -> Result<SdBounds> {
    class.require_total()?;
    let ant = delta_ant(class)?;
    let mut lower = Vec::new();
    let mut upper = Vec::new();

    if ant.is_empty() {
        lower.push(LowerBound {
            value: -1,
            source: LowerSource::EmptyComplex,
            witness: None,
        });
        upper.push(UpperBound {
            value: -1,
            source: UpperSource::EmptyComplex,
        });
    } else {
        upper.push(UpperBound {
            value: ant.dim(),
            source: UpperSource::DimensionBound,
        });
    }

    let mut s = largest_shattered_set(class, DimensionVariant::Primal)?;
    let vc = s.len();
    s.truncate(MAX_CROSSPOLYTOPE_DIM + 1);
    if !s.is_empty() {
        let w = crosspolytope_witness(class, &s)?;
        lower.push(LowerBound {
            value: s.len() as isize - 1,
            source: LowerSource::Crosspolytope { set: s },
            witness: Some(w),
        });
    }

    let mut hs = largest_shattered_set(class, DimensionVariant::DualAntipodal)?;
    hs.truncate(MAX_BARYCENTRIC_DIM + 2);
    if hs.len() >= 2 {
        let w = barycentric_witness(class, &hs)?;
        lower.push(LowerBound {
            value: hs.len() as isize - 2,
            source: LowerSource::Barycentric { hypotheses: hs },
            witness: Some(w),
        });
    }

    if vc <= 1 {
        upper.push(UpperBound {
            value: 1,
            source: UpperSource::VcAtMostOne,
        });
        match classify_low_vc(class)? {
            LowVcClassification::ThresholdLike { .. } => upper.push(UpperBound {
                value: 0,
                source: UpperSource::ThresholdLike,
            }),
            LowVcClassification::Vc1NonThreshold { witness } if !opts.no_hexagon => lower.push(LowerBound {
                value: 1,
                source: LowerSource::Hexagon,
                witness: Some(witness),
            }),
            _ => {}
        }
    }

    if is_extremal_bounded(class)? {
        upper.push(UpperBound {
            value: 2 * vc as isize - 1,
            source: UpperSource::Extremal { vc },
        });
    }

    if let Some(rep) = &opts.sign_rank {
        if let Some(v) = verify_representation(class, rep)? {
            return Err(Error::Verification(format!("sign-rank certificate: {v}")));
        }
        upper.push(UpperBound {
            value: rep.d as isize - 1,
            source: UpperSource::SignRank { d: rep.d },
        });
    }

    // A nonempty antipodal complex has a vertex on a shattered point, so some
    // lower certificate always exists.
    let lo = lower.iter().map(|c| c.value).max().expect("at least one lower bound");
    let hi = upper.iter().map(|c| c.value).min().expect("at least one upper bound");
    if lo > hi {
        return Err(Error::Verification(format!("inconsistent bounds: lower {lo} > upper {hi}")));
    }
    Ok(SdBounds {
        lower: lo,
        upper: hi,
        lower_certificates: lower,
        upper_certificates: upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, parse_class, Family};

    #[test]
    fn named_examples() {
        let b = sd_bounds(&family_class(Family::Cube, 3, None).unwrap(), &SdOptions::default()).unwrap();
        assert_eq!((b.lower, b.upper), (2, 2));
        let b = sd_bounds(&parse_class("+-+").unwrap(), &SdOptions::default()).unwrap();
        assert_eq!((b.lower, b.upper), (-1, -1));
        let b = sd_bounds(&family_class(Family::Threshold, 4, None).unwrap(), &SdOptions::default()).unwrap();
        assert_eq!((b.lower, b.upper), (0, 0));
        assert_eq!(b.best_upper().source, UpperSource::ThresholdLike);
    }

    #[test]
    fn universal_lower_bounds() {
        for n in 2..=5 {
            let u = family_class(Family::Universal, n, None).unwrap();
            let b = sd_bounds(&u, &SdOptions::default()).unwrap();
            assert!(b.lower >= n as isize - 2, "U_{n}: {b:?}");
            assert!(b.lower_certificates.iter().all(|c| c.witness.as_ref().is_none_or(|w| w.verify().ok())));
        }
    }

    #[test]
    fn hexagon_lifts_lower_bound() {
        let c = parse_class("+--\n-+-\n--+").unwrap();
        let b = sd_bounds(&c, &SdOptions::default()).unwrap();
        assert_eq!((b.lower, b.upper), (1, 1));
        let b = sd_bounds(
            &c,
            &SdOptions {
                no_hexagon: true,
                ..SdOptions::default()
            },
        )
        .unwrap();
        assert_eq!(b.upper, 1);
        assert!(b.lower <= 1);
    }

    #[test]
    fn sign_rank_upper_bound() {
        let u3 = family_class(Family::Universal, 3, None).unwrap();
        let opts = SdOptions {
            sign_rank: Some(crate::signrank::universal_representation(3)),
            ..SdOptions::default()
        };
        let b = sd_bounds(&u3, &opts).unwrap();
        assert!(b
            .upper_certificates
            .iter()
            .any(|c| c.source == UpperSource::SignRank { d: 3 } && c.value == 2));
    }
}
