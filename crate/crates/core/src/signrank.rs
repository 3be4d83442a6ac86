//! Sign-rank certificates: verification and direct sums over products.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concept::{product_class, ConceptClass, Sign};
use crate::error::{Error, Result};

/// Inner products with absolute value below this are ambiguous in float mode.
pub const AMBIGUITY_THRESHOLD: f64 = 1e-9;

/// A coordinate: exact rationals are compared exactly, floats with a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Scalar {
        Scalar::int(0)
    }

    fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) if r.is_integer() => match r.numer().to_i64() {
                Some(i) => s.serialize_i64(i),
                None => s.collect_str(r),
            },
            Scalar::Exact(r) => s.collect_str(r),
            Scalar::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::int(i))
                } else if let Some(u) = n.as_u64() {
                    Ok(Scalar::Exact(BigRational::from_integer(BigInt::from(u))))
                } else {
                    Ok(Scalar::Float(n.as_f64().ok_or_else(|| D::Error::custom("bad number"))?))
                }
            }
            serde_json::Value::String(s) => s
                .trim()
                .parse::<BigRational>()
                .map(Scalar::Exact)
                .map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}"))),
            other => Err(D::Error::custom(format!("expected a number or rational string, got {other}"))),
        }
    }
}

/// Vectors `phi(x)` for domain points and `w(h)` for hypotheses in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignRepresentation {
    pub d: usize,
    pub phi: Vec<Vec<Scalar>>,
    pub w: Vec<Vec<Scalar>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    WrongSign,
    Ambiguous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub hypothesis: usize,
    pub point: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::WrongSign => "has the wrong sign",
            ViolationKind::Ambiguous => "is zero or within the ambiguity threshold",
        };
        write!(f, "<w(h{}), phi(x{})> {what}", self.hypothesis, self.point)
    }
}

fn inner_sign(a: &[Scalar], b: &[Scalar]) -> Option<Sign> {
    let exact = a.iter().chain(b).all(|s| matches!(s, Scalar::Exact(_)));
    if exact {
        let mut acc = BigRational::zero();
        for (x, y) in a.iter().zip(b) {
            if let (Scalar::Exact(x), Scalar::Exact(y)) = (x, y) {
                acc += x * y;
            }
        }
        (!acc.is_zero()).then(|| Sign::from_bool(acc.is_positive()))
    } else {
        let v: f64 = a.iter().zip(b).map(|(x, y)| x.to_f64() * y.to_f64()).sum();
        (v.abs() >= AMBIGUITY_THRESHOLD).then(|| Sign::from_bool(v > 0.0))
    }
}

fn check_shape(class: &ConceptClass, rep: &SignRepresentation) -> Result<()> {
    if rep.phi.len() != class.domain_size() || rep.w.len() != class.len() {
        return Err(Error::DomainMismatch(format!(
            "representation has {} point vectors and {} hypothesis vectors; class has {} points and {} hypotheses",
            rep.phi.len(),
            rep.w.len(),
            class.domain_size(),
            class.len()
        )));
    }
    if let Some(v) = rep.phi.iter().chain(&rep.w).find(|v| v.len() != rep.d) {
        return Err(Error::DomainMismatch(format!(
            "vector of length {} in a representation of dimension {}",
            v.len(),
            rep.d
        )));
    }
    Ok(())
}

/// Checks `sign <w(h), phi(x)> = h(x)` for every pair. Returns the first
/// violation in (hypothesis, point) order.
pub fn verify_representation(class: &ConceptClass, rep: &SignRepresentation) -> Result<Option<Violation>> {
    class.require_total()?;
    check_shape(class, rep)?;
    let n = class.domain_size();
    Ok((0..class.len() * n).into_par_iter().find_map_first(|k| {
        let (h, x) = (k / n, k % n);
        let kind = match inner_sign(&rep.w[h], &rep.phi[x]) {
            None => ViolationKind::Ambiguous,
            Some(s) if s != class.value(h, x) => ViolationKind::WrongSign,
            Some(_) => return None,
        };
        Some(Violation {
            hypothesis: h,
            point: x,
            kind,
        })
    }))
}

fn require_verified(class: &ConceptClass, rep: &SignRepresentation, which: &str) -> Result<()> {
    match verify_representation(class, rep)? {
        None => Ok(()),
        Some(v) => Err(Error::Verification(format!("{which} representation: {v}"))),
    }
}

/// Direct sum: `phi(x) = (phi_a(x), 0)` on the first factor's points,
/// `(0, phi_b(x))` on the second, and `w(g×h) = (w_a(g), w_b(h))`.
pub fn product_representation(
    a: &SignRepresentation,
    class_a: &ConceptClass,
    b: &SignRepresentation,
    class_b: &ConceptClass,
    max_hypotheses: usize,
) -> Result<(SignRepresentation, ConceptClass)> {
    require_verified(class_a, a, "first")?;
    require_verified(class_b, b, "second")?;
    let product = product_class(class_a, class_b, max_hypotheses)?;
    let d = a.d + b.d;
    let pad = |v: &[Scalar], before: usize, after: usize| -> Vec<Scalar> {
        std::iter::repeat_with(Scalar::zero)
            .take(before)
            .chain(v.iter().cloned())
            .chain(std::iter::repeat_with(Scalar::zero).take(after))
            .collect()
    };
    let phi = a
        .phi
        .iter()
        .map(|v| pad(v, 0, b.d))
        .chain(b.phi.iter().map(|v| pad(v, a.d, 0)))
        .collect();
    let w = a
        .w
        .iter()
        .flat_map(|wa| b.w.iter().map(move |wb| wa.iter().chain(wb).cloned().collect()))
        .collect();
    let rep = SignRepresentation { d, phi, w };
    require_verified(&product, &rep, "product")?;
    Ok((rep, product))
}

/// `w(h_i) = e_i`, `phi(S)_i = ±1` by membership of `i` in `S`, for the
/// universal class on `n` hypotheses.
pub fn universal_representation(n: usize) -> SignRepresentation {
    let size = 1usize << n;
    SignRepresentation {
        d: n,
        phi: (0..size)
            .map(|s| (0..n).map(|i| Scalar::int(if s >> i & 1 == 1 { 1 } else { -1 })).collect())
            .collect(),
        w: (0..n)
            .map(|i| (0..n).map(|j| Scalar::int((i == j) as i64)).collect())
            .collect(),
    }
}

/// One-dimensional representation of a class whose concepts are constant or
/// are all the same: `w(h) = ±1`, `phi(x) = ±1`.
pub fn one_dimensional_representation(class: &ConceptClass) -> Result<SignRepresentation> {
    class.require_total()?;
    let n = class.domain_size();
    let base: Vec<Sign> = (0..n).map(|x| class.value(0, x)).collect();
    let mut w = Vec::with_capacity(class.len());
    for h in 0..class.len() {
        let same = (0..n).all(|x| class.value(h, x) == base[x]);
        let neg = (0..n).all(|x| class.value(h, x) == -base[x]);
        w.push(vec![Scalar::int(if same { 1 } else if neg { -1 } else { 0 })]);
        if !same && !neg {
            return Err(Error::Precondition(format!(
                "hypothesis {h} is neither equal nor opposite to hypothesis 0"
            )));
        }
    }
    let phi = base.iter().map(|s| vec![Scalar::int(if s.is_plus() { 1 } else { -1 })]).collect();
    Ok(SignRepresentation { d: 1, phi, w })
}

#[derive(Serialize, Deserialize)]
struct RepresentationJson {
    d: usize,
    phi: BTreeMap<String, Vec<Scalar>>,
    w: BTreeMap<String, Vec<Scalar>>,
}

fn indexed(map: BTreeMap<String, Vec<Scalar>>, what: &str) -> std::result::Result<Vec<Vec<Scalar>>, String> {
    let mut out: Vec<Option<Vec<Scalar>>> = vec![None; map.len()];
    for (k, v) in map {
        let i: usize = k.parse().map_err(|_| format!("{what} key {k:?} is not an index"))?;
        let slot = out.get_mut(i).ok_or_else(|| format!("{what} index {i} out of range"))?;
        *slot = Some(v);
    }
    Ok(out.into_iter().map(|v| v.expect("indices are a permutation")).collect())
}

impl Serialize for SignRepresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let keyed = |vs: &[Vec<Scalar>]| vs.iter().enumerate().map(|(i, v)| (i.to_string(), v.clone())).collect();
        RepresentationJson {
            d: self.d,
            phi: keyed(&self.phi),
            w: keyed(&self.w),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignRepresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RepresentationJson::deserialize(d)?;
        Ok(SignRepresentation {
            d: j.d,
            phi: indexed(j.phi, "phi").map_err(D::Error::custom)?,
            w: indexed(j.w, "w").map_err(D::Error::custom)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, parse_class, Family};

    #[test]
    fn universal_three() {
        let u3 = family_class(Family::Universal, 3, None).unwrap();
        let rep = universal_representation(3);
        assert_eq!(verify_representation(&u3, &rep).unwrap(), None);
        let mut bad = rep.clone();
        bad.phi[5][0] = Scalar::zero();
        let v = verify_representation(&u3, &bad).unwrap().unwrap();
        assert_eq!((v.hypothesis, v.point, v.kind), (0, 5, ViolationKind::Ambiguous));
    }

    #[test]
    fn float_threshold() {
        let c1 = family_class(Family::Cube, 1, None).unwrap();
        let rep = |e: f64| SignRepresentation {
            d: 1,
            phi: vec![vec![Scalar::Float(e)]],
            w: (0..c1.len())
                .map(|h| vec![Scalar::int(if c1.value(h, 0).is_plus() { 1 } else { -1 })])
                .collect(),
        };
        assert_eq!(verify_representation(&c1, &rep(1.0)).unwrap(), None);
        assert_eq!(
            verify_representation(&c1, &rep(1e-10)).unwrap().unwrap().kind,
            ViolationKind::Ambiguous
        );
        assert_eq!(
            verify_representation(&c1, &rep(-0.5)).unwrap().unwrap().kind,
            ViolationKind::WrongSign
        );
    }

    #[test]
    fn products() {
        let u3 = family_class(Family::Universal, 3, None).unwrap();
        let rep = universal_representation(3);
        let (p, class) = product_representation(&rep, &u3, &rep, &u3, 1 << 20).unwrap();
        assert_eq!(p.d, 6);
        assert_eq!(verify_representation(&class, &p).unwrap(), None);

        let single = parse_class("+-+").unwrap();
        let one = one_dimensional_representation(&single).unwrap();
        let (p, class) = product_representation(&rep, &u3, &one, &single, 1 << 20).unwrap();
        assert_eq!(p.d, 4);
        assert_eq!(verify_representation(&class, &p).unwrap(), None);

        let mut bad = rep.clone();
        bad.w[0][0] = Scalar::int(-1);
        assert!(product_representation(&bad, &u3, &rep, &u3, 1 << 20)
            .unwrap_err()
            .is_verification());
    }

    #[test]
    fn shape_errors() {
        let u2 = family_class(Family::Universal, 2, None).unwrap();
        assert!(matches!(
            verify_representation(&u2, &universal_representation(3)),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let rep = SignRepresentation {
            d: 2,
            phi: vec![
                vec![Scalar::int(1), Scalar::Float(0.25)],
                vec![Scalar::Exact("3/4".parse().unwrap()), Scalar::int(-2)],
            ],
            w: vec![vec![Scalar::int(0), Scalar::int(1)]],
        };
        let s = serde_json::to_string(&rep).unwrap();
        assert_eq!(s, r#"{"d":2,"phi":{"0":[1,0.25],"1":["3/4",-2]},"w":{"0":[0,1]}}"#);
        let back: SignRepresentation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
        assert!(serde_json::from_str::<SignRepresentation>(r#"{"d":1,"phi":{"1":[1]},"w":{}}"#).is_err());
    }
}
