use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::template::{SphereTemplate, TemplateKind, MAX_BARYCENTRIC_DIM};
use crate::bitset::BitSet;
use crate::complex::{delta_ant, AntipodalComplex, VertexLabel};
use crate::concept::{product_class, shatters, verify_class_leq, ConceptClass, Sign};
use crate::error::{check_cap, Error, Result};

/// An equivariant simplicial map from a certified sphere into an antipodal complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereWitness {
    pub template: SphereTemplate,
    pub vertex_map: Vec<usize>,
    pub target: AntipodalComplex,
    pub embedded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum WitnessFailure {
    Template { detail: String, simplex: Option<Vec<usize>> },
    MapShape { detail: String },
    NotSimplicial { simplex: Vec<usize> },
    Equivariance { vertex: usize },
    Injectivity { embedded_flag: bool, collision: Option<(usize, usize)> },
}

impl fmt::Display for WitnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessFailure::Template { detail, simplex } => {
                write!(f, "template invariant: {detail}")?;
                if let Some(s) = simplex {
                    write!(f, " {s:?}")?;
                }
                Ok(())
            }
            WitnessFailure::MapShape { detail } => write!(f, "vertex map: {detail}"),
            WitnessFailure::NotSimplicial { simplex } => {
                write!(f, "simplicial: image of template simplex {simplex:?} is not a target simplex")
            }
            WitnessFailure::Equivariance { vertex } => {
                write!(f, "equivariance: map does not commute with antipodes at template vertex {vertex}")
            }
            WitnessFailure::Injectivity {
                embedded_flag,
                collision,
            } => match collision {
                Some((a, b)) => write!(
                    f,
                    "injectivity: vertices {a} and {b} share an image but embedded flag is {embedded_flag}"
                ),
                None => write!(f, "injectivity: map is injective but embedded flag is {embedded_flag}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub transcript: Vec<String>,
    pub failure: Option<WitnessFailure>,
}

impl WitnessReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

impl SphereWitness {
    pub fn dim(&self) -> isize {
        self.template.dim()
    }

    pub fn verify(&self) -> WitnessReport {
        verify_witness(self)
    }

    /// Verifies and converts a failure into an error.
    pub fn certified(self) -> Result<SphereWitness> {
        let r = verify_witness(&self);
        match r.failure {
            None => Ok(self),
            Some(f) => Err(Error::Verification(f.to_string())),
        }
    }
}

/// Runs the checks in order: template, map shape, simpliciality,
/// equivariance, injectivity. Stops at the first violation.
pub fn verify_witness(w: &SphereWitness) -> WitnessReport {
    let mut transcript = Vec::new();
    let fail = |transcript: Vec<String>, f: WitnessFailure| WitnessReport {
        transcript,
        failure: Some(f),
    };
    if let Some((detail, simplex)) = w.template.check() {
        return fail(transcript, WitnessFailure::Template { detail, simplex });
    }
    transcript.push(format!(
        "template {} matches its canonical build ({} vertices, {} maximal simplices)",
        w.template.kind,
        w.template.complex.vertex_count(),
        w.template.complex.maximal_simplices().len()
    ));
    let nt = w.template.complex.vertex_count();
    let ng = w.target.vertex_count();
    if w.vertex_map.len() != nt {
        return fail(
            transcript,
            WitnessFailure::MapShape {
                detail: format!("has {} entries for {nt} template vertices", w.vertex_map.len()),
            },
        );
    }
    if let Some(v) = w.vertex_map.iter().position(|&u| u >= ng) {
        return fail(
            transcript,
            WitnessFailure::MapShape {
                detail: format!("template vertex {v} maps outside the {ng} target vertices"),
            },
        );
    }
    for s in w.template.complex.maximal_simplices() {
        let img = BitSet::from_indices(ng, s.iter().map(|v| w.vertex_map[v]));
        if !w.target.complex().contains_simplex(&img) {
            return fail(transcript, WitnessFailure::NotSimplicial { simplex: s.to_vec() });
        }
    }
    transcript.push(format!(
        "all {} maximal template simplices map into target simplices",
        w.template.complex.maximal_simplices().len()
    ));
    for v in 0..nt {
        if w.vertex_map[w.template.complex.antipode(v)] != w.target.antipode(w.vertex_map[v]) {
            return fail(transcript, WitnessFailure::Equivariance { vertex: v });
        }
    }
    transcript.push(format!("map commutes with antipodes on all {nt} vertices"));
    let mut first: HashMap<usize, usize> = HashMap::new();
    let mut collision = None;
    for (v, &u) in w.vertex_map.iter().enumerate() {
        if let Some(&p) = first.get(&u) {
            collision = Some((p, v));
            break;
        }
        first.insert(u, v);
    }
    if collision.is_some() == w.embedded {
        return fail(
            transcript,
            WitnessFailure::Injectivity {
                embedded_flag: w.embedded,
                collision,
            },
        );
    }
    transcript.push(if w.embedded {
        "map is injective (embedded)".to_string()
    } else {
        "map is not injective (not embedded)".to_string()
    });
    WitnessReport {
        transcript,
        failure: None,
    }
}

fn point_index(target: &AntipodalComplex, x: usize, y: Sign) -> Result<usize> {
    target
        .index_of(&VertexLabel::point(x, y))
        .ok_or_else(|| Error::Verification(format!("({x},{y}) is not a vertex of the antipodal complex")))
}

fn injective(map: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::new();
    map.iter().all(|u| seen.insert(*u))
}

/// The crosspolytope `D_{|S|-1}` sitting on `S × {-,+}` for a shattered `S`.
pub fn crosspolytope_witness(class: &ConceptClass, s: &[usize]) -> Result<SphereWitness> {
    if s.is_empty() {
        return Err(Error::Precondition("crosspolytope witness needs a nonempty set".into()));
    }
    if !shatters(class, s)? {
        return Err(Error::Precondition(format!("{s:?} is not shattered")));
    }
    let template = SphereTemplate::new(TemplateKind::Crosspolytope(s.len() - 1))?;
    let target = delta_ant(class)?;
    let vertex_map = template
        .complex
        .vertices()
        .iter()
        .map(|l| match l {
            VertexLabel::CrossPole { i, y } => point_index(&target, s[*i], *y),
            _ => unreachable!("crosspolytope labels"),
        })
        .collect::<Result<Vec<_>>>()?;
    SphereWitness {
        template,
        vertex_map,
        target,
        embedded: true,
    }
    .certified()
}

/// The barycentric boundary `B^{k-2}` for `k` dually antipodally shattered
/// hypotheses. The subset `T` goes to `(x,+)` where `x` is a point on which
/// exactly the hypotheses in `T` are positive, or to `(x,-)` where exactly the
/// complement is positive. Each antipodal pair of subsets uses the
/// lowest-indexed point realizing either pattern.
pub fn barycentric_witness(class: &ConceptClass, hs: &[usize]) -> Result<SphereWitness> {
    class.require_total()?;
    let k = hs.len();
    if k < 2 {
        return Err(Error::Precondition("barycentric witness needs at least two hypotheses".into()));
    }
    check_cap("barycentric witness hypotheses", k as u64, MAX_BARYCENTRIC_DIM as u64 + 2)?;
    for &h in hs {
        if h >= class.len() {
            return Err(Error::IndexOutOfRange {
                what: "hypothesis",
                index: h,
                len: class.len(),
            });
        }
    }
    let full = (1usize << k) - 1;
    let mut first = vec![usize::MAX; full + 1];
    for x in (0..class.domain_size()).rev() {
        let p = hs
            .iter()
            .enumerate()
            .filter(|(_, &h)| class.hypothesis(h).is_plus(x))
            .fold(0usize, |a, (i, _)| a | 1 << i);
        first[p] = x;
    }
    let template = SphereTemplate::new(TemplateKind::BarycentricBoundary(k - 2))?;
    let target = delta_ant(class)?;
    let vertex_map = template
        .complex
        .vertices()
        .iter()
        .map(|l| {
            let VertexLabel::Subset(t) = l else {
                unreachable!("barycentric labels")
            };
            let p = t.iter().fold(0usize, |a, i| a | 1 << i);
            let (xp, xn) = (first[p], first[full & !p]);
            if xp == usize::MAX && xn == usize::MAX {
                return Err(Error::Precondition(format!(
                    "hypotheses {hs:?} are not dually antipodally shattered: no point realizes pattern {t:?} up to sign"
                )));
            }
            if xp <= xn {
                point_index(&target, xp, Sign::Plus)
            } else {
                point_index(&target, xn, Sign::Minus)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let embedded = injective(&vertex_map);
    SphereWitness {
        template,
        vertex_map,
        target,
        embedded,
    }
    .certified()
}

/// Join of two witnesses, landing in the antipodal complex of the product class.
pub fn join_witness(
    a: &SphereWitness,
    class_a: &ConceptClass,
    b: &SphereWitness,
    class_b: &ConceptClass,
    max_hypotheses: usize,
) -> Result<(SphereWitness, ConceptClass)> {
    for (w, name) in [(a, "first"), (b, "second")] {
        if let Some(f) = verify_witness(w).failure {
            return Err(Error::Precondition(format!("{name} witness is invalid: {f}")));
        }
    }
    if a.target != delta_ant(class_a)? || b.target != delta_ant(class_b)? {
        return Err(Error::Precondition("witness targets must be the antipodal complexes of the given classes".into()));
    }
    let product = product_class(class_a, class_b, max_hypotheses)?;
    let na = class_a.domain_size();
    let template = SphereTemplate::new(TemplateKind::Join(vec![a.template.kind.clone(), b.template.kind.clone()]))?;
    let target = delta_ant(&product)?;
    let lift = |w: &SphereWitness, shift: usize| -> Result<Vec<usize>> {
        w.vertex_map
            .iter()
            .map(|&u| {
                let (x, y) = w.target.vertices()[u].as_point().expect("domain point");
                point_index(&target, x + shift, y)
            })
            .collect()
    };
    let mut vertex_map = lift(a, 0)?;
    vertex_map.extend(lift(b, na)?);
    let w = SphereWitness {
        template,
        vertex_map,
        target,
        embedded: a.embedded && b.embedded,
    }
    .certified()?;
    Ok((w, product))
}

/// Pushes a witness for `a` forward along `a <= b` via `(x,y) -> (phi(x),y)`.
pub fn transport_witness(
    w: &SphereWitness,
    a: &ConceptClass,
    b: &ConceptClass,
    phi: &[usize],
    sigma: &[usize],
) -> Result<SphereWitness> {
    if !verify_class_leq(a, b, phi, sigma)? {
        return Err(Error::Precondition("maps do not witness the class order".into()));
    }
    let target = delta_ant(b)?;
    let vertex_map = w
        .vertex_map
        .iter()
        .map(|&u| {
            let (x, y) = w.target.vertices()[u].as_point().expect("domain point");
            point_index(&target, phi[x], y)
        })
        .collect::<Result<Vec<_>>>()?;
    let embedded = injective(&vertex_map);
    SphereWitness {
        template: w.template.clone(),
        vertex_map,
        target,
        embedded,
    }
    .certified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{family_class, parse_class, Family, DEFAULT_MAX_HYPOTHESES};

    #[test]
    fn crosspolytope_examples() {
        let c3 = family_class(Family::Cube, 3, None).unwrap();
        let w = crosspolytope_witness(&c3, &[0, 1, 2]).unwrap();
        assert_eq!(w.dim(), 2);
        assert!(w.embedded);
        let t3 = family_class(Family::Threshold, 3, None).unwrap();
        let w0 = crosspolytope_witness(&t3, &[1]).unwrap();
        assert_eq!(w0.dim(), 0);
        assert_eq!(w0.template.complex.vertex_count(), 2);
        assert!(crosspolytope_witness(&t3, &[0, 1]).is_err());
    }

    #[test]
    fn barycentric_examples() {
        let u3 = family_class(Family::Universal, 3, None).unwrap();
        let w = barycentric_witness(&u3, &[0, 1, 2]).unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!(w.template.complex.vertex_count(), 6);
        let u2 = family_class(Family::Universal, 2, None).unwrap();
        assert_eq!(barycentric_witness(&u2, &[0, 1]).unwrap().dim(), 0);
        let t3 = family_class(Family::Threshold, 3, None).unwrap();
        assert!(barycentric_witness(&t3, &[0, 1, 2]).is_err());
    }

    #[test]
    fn mutations_are_localized() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let w = crosspolytope_witness(&c2, &[0, 1]).unwrap();
        let mut m = w.clone();
        m.vertex_map[0] = m.target.antipode(m.vertex_map[0]);
        match verify_witness(&m).failure {
            Some(WitnessFailure::Equivariance { vertex }) => assert!(vertex == 0 || vertex == 1),
            other => panic!("{other:?}"),
        }
        let mut m = w.clone();
        m.embedded = false;
        assert!(matches!(verify_witness(&m).failure, Some(WitnessFailure::Injectivity { .. })));
    }

    #[test]
    fn joins() {
        let c1 = family_class(Family::Cube, 1, None).unwrap();
        let w = crosspolytope_witness(&c1, &[0]).unwrap();
        let (j, p) = join_witness(&w, &c1, &w, &c1, DEFAULT_MAX_HYPOTHESES).unwrap();
        assert_eq!(j.dim(), 1);
        assert_eq!(p.len(), 4);
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let w2 = crosspolytope_witness(&c2, &[0, 1]).unwrap();
        let (j2, _) = join_witness(&w2, &c2, &w2, &c2, DEFAULT_MAX_HYPOTHESES).unwrap();
        assert_eq!(j2.dim(), 3);
        let u3 = family_class(Family::Universal, 3, None).unwrap();
        let b = barycentric_witness(&u3, &[0, 1, 2]).unwrap();
        let (j3, _) = join_witness(&b, &u3, &b, &u3, DEFAULT_MAX_HYPOTHESES).unwrap();
        assert_eq!(j3.dim(), 3);
        assert!(join_witness(&b, &c2, &b, &u3, DEFAULT_MAX_HYPOTHESES).is_err());
    }

    #[test]
    fn transport_along_inclusion() {
        let t2 = family_class(Family::Threshold, 2, None).unwrap();
        let t3 = family_class(Family::Threshold, 3, None).unwrap();
        let w = crosspolytope_witness(&t2, &[1]).unwrap();
        let moved = transport_witness(&w, &t2, &t3, &[0, 1], &[0, 1, 2]).unwrap();
        assert!(verify_witness(&moved).ok());
        let one = parse_class("+").unwrap();
        assert!(transport_witness(&w, &t2, &one, &[0, 0], &[0, 0, 0]).is_err());
    }
}
