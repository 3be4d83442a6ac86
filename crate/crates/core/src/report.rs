//! One-row summary of a class: dimensions, sd interval, extremality and
//! low-VC bucket.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::concept::{dimensions, ConceptClass, Dimensions};
use crate::error::{Error, Result};
use crate::extremal::{classify_low_vc, is_extremal_bounded};
use crate::spheres::{sd_bounds, SdOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIdentity {
    pub name: Option<String>,
    /// SHA-256 of the sorted hypothesis rows, newline-terminated.
    pub hash: String,
    pub domain_size: usize,
    pub hypotheses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdInterval {
    pub lower: isize,
    pub upper: isize,
    pub lower_certificate: String,
    pub upper_certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub class: ClassIdentity,
    pub dimensions: Dimensions,
    pub sd: SdInterval,
    pub extremal: bool,
    pub classification: String,
    /// `ceil((sd_lower + 3) / 2)`, present only when `sd_lower >= 1`.
    pub lr_floor: Option<isize>,
}

pub fn class_hash(class: &ConceptClass) -> String {
    let mut h = Sha256::new();
    for row in class.sorted_rows() {
        h.update(row.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

pub fn lr_floor(sd_lower: isize) -> Option<isize> {
    (sd_lower >= 1).then(|| (sd_lower + 4) / 2)
}

pub fn build_report(class: &ConceptClass, name: Option<&str>, opts: &SdOptions) -> Result<Report> {
    class.require_total()?;
    let dims = dimensions(class)?;
    let sd = sd_bounds(class, opts)?;
    if sd.lower > sd.upper {
        return Err(Error::Verification("sd lower bound exceeds upper bound".into()));
    }
    Ok(Report {
        class: ClassIdentity {
            name: name.map(str::to_string),
            hash: class_hash(class),
            domain_size: class.domain_size(),
            hypotheses: class.len(),
        },
        dimensions: dims,
        sd: SdInterval {
            lower: sd.lower,
            upper: sd.upper,
            lower_certificate: sd.best_lower().source.name().to_string(),
            upper_certificate: sd.best_upper().source.name().to_string(),
        },
        extremal: is_extremal_bounded(class)?,
        classification: classify_low_vc(class)?.bucket().to_string(),
        lr_floor: lr_floor(sd.lower),
    })
}

impl SdInterval {
    /// `[l,u]`, or the single value when the bounds meet.
    pub fn display(&self) -> String {
        if self.lower == self.upper {
            self.lower.to_string()
        } else {
            format!("[{},{}]", self.lower, self.upper)
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.dimensions;
        writeln!(f, "class          {}", self.class.name.as_deref().unwrap_or("-"))?;
        writeln!(f, "sha256         {}", self.class.hash)?;
        writeln!(f, "|X|, |H|       {}, {}", self.class.domain_size, self.class.hypotheses)?;
        writeln!(f, "VC             {}", d.vc)?;
        writeln!(f, "VC*            {}", d.vc_dual)?;
        writeln!(f, "VC^a           {}", d.vc_antipodal)?;
        writeln!(f, "VC*a           {}", d.vc_dual_antipodal)?;
        writeln!(
            f,
            "sd             {}  (lower: {}; upper: {})",
            self.sd.display(),
            self.sd.lower_certificate,
            self.sd.upper_certificate
        )?;
        writeln!(f, "extremal       {}", self.extremal)?;
        writeln!(f, "classification {}", self.classification)?;
        match self.lr_floor {
            Some(v) => writeln!(f, "LR floor       {v}"),
            None => writeln!(f, "LR floor       -"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, Family};

    #[test]
    fn lr_floor_values() {
        assert_eq!(lr_floor(0), None);
        assert_eq!(lr_floor(1), Some(2));
        assert_eq!(lr_floor(2), Some(3));
        assert_eq!(lr_floor(3), Some(3));
        assert_eq!(lr_floor(4), Some(4));
    }

    #[test]
    fn cube_three_row() {
        let r = build_report(&family_class(Family::Cube, 3, None).unwrap(), Some("C_3"), &SdOptions::default()).unwrap();
        assert_eq!((r.dimensions.vc, r.dimensions.vc_dual), (3, 1));
        assert_eq!((r.sd.lower, r.sd.upper), (2, 2));
        assert!(r.extremal);
        assert_eq!(r.classification, "vc2_plus");
        assert_eq!(r.lr_floor, Some(3));
        assert!(r.to_string().contains("sd             2  "));
    }

    #[test]
    fn hash_ignores_row_order() {
        let a = crate::concept::parse_class("+-\n-+").unwrap();
        let b = crate::concept::parse_class("-+\n+-").unwrap();
        assert_eq!(class_hash(&a), class_hash(&b));
        assert_eq!(class_hash(&a).len(), 64);
    }
}
