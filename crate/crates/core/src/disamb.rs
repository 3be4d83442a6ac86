//! Antipodal domains, symmetrization, antipodal extensions, and the two
//! constructions linking disambiguations of simplicial spheres with sphere
//! witnesses in the antipodal complex.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::complex::{delta_ant, faces, AntipodalComplex, VertexLabel, FACE_CAP};
use crate::concept::{ConceptClass, Label, PartialHypothesis, Sign};
use crate::error::{Error, Result};
use crate::spheres::{verify_witness, SphereTemplate, SphereWitness};

/// A domain with a fixed-point-free involution and a representation map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipodalDomain {
    involution: Vec<usize>,
    rep: Vec<usize>,
}

impl AntipodalDomain {
    /// Validates the pairing and that `rep` picks one element per pair,
    /// shared by both members.
    pub fn new(involution: Vec<usize>, rep: Vec<usize>) -> Result<Self> {
        let n = involution.len();
        if rep.len() != n {
            return Err(Error::DomainMismatch(format!(
                "representation map has {} entries for {n} points",
                rep.len()
            )));
        }
        for x in 0..n {
            let y = involution[x];
            if y >= n || y == x || involution[y] != x {
                return Err(Error::Precondition(format!("involution is not a fixed-point-free pairing at {x}")));
            }
            if (rep[x] != x && rep[x] != y) || rep[y] != rep[x] {
                return Err(Error::Precondition(format!("representation map is inconsistent on pair {{{x},{y}}}")));
            }
        }
        Ok(AntipodalDomain { involution, rep })
    }

    /// The smaller index of each pair represents it.
    pub fn with_default_rep(involution: Vec<usize>) -> Result<Self> {
        let rep = involution.iter().enumerate().map(|(x, &y)| x.min(y)).collect();
        Self::new(involution, rep)
    }

    /// `X × {-,+}` with `(x,+)` at index `x` and `(x,-)` at `n + x`, represented by `(x,+)`.
    pub fn standard(n: usize) -> Self {
        let involution = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        let rep = (0..2 * n).map(|i| i % n).collect();
        AntipodalDomain { involution, rep }
    }

    pub fn size(&self) -> usize {
        self.involution.len()
    }

    pub fn antipode(&self, x: usize) -> usize {
        self.involution[x]
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn rep(&self, x: usize) -> usize {
        self.rep[x]
    }

    /// Image of the representation map, ascending.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.rep[x] == x).collect()
    }
}

/// A total class on an antipodal domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedClass {
    pub domain: AntipodalDomain,
    pub class: ConceptClass,
}

impl PairedClass {
    pub fn new(domain: AntipodalDomain, class: ConceptClass) -> Result<Self> {
        class.require_total()?;
        if class.domain_size() != domain.size() {
            return Err(Error::DomainMismatch(format!(
                "class has {} points, antipodal domain has {}",
                class.domain_size(),
                domain.size()
            )));
        }
        Ok(PairedClass { domain, class })
    }

    /// First hypothesis and point with `h(-x) = h(x)`, if any.
    pub fn antipodality_violation(&self) -> Option<(usize, usize)> {
        let n = self.domain.size();
        (0..self.class.len()).find_map(|h| {
            (0..n)
                .find(|&x| self.class.value(h, x) == self.class.value(h, self.domain.antipode(x)))
                .map(|x| (h, x))
        })
    }

    pub fn is_antipodal(&self) -> bool {
        self.antipodality_violation().is_none()
    }
}

/// `h^r(x)`: unchanged where `h` is already antipodal on the pair, otherwise
/// copied from the representative with the sign fixed by which side `x` is on.
pub fn symmetrize(pc: &PairedClass) -> Result<PairedClass> {
    let d = &pc.domain;
    let hyps = pc
        .class
        .hypotheses()
        .iter()
        .map(|h| {
            let signs: Vec<Sign> = (0..d.size())
                .map(|x| {
                    let (hx, hnx) = (h.sign(x), h.sign(d.antipode(x)));
                    if hx == -hnx || d.rep(x) == x {
                        hx
                    } else {
                        -hx
                    }
                })
                .collect();
            PartialHypothesis::from_signs(&signs)
        })
        .collect();
    let out = PairedClass::new(d.clone(), ConceptClass::new_dedup(d.size(), hyps)?)?;
    if let Some((h, x)) = out.antipodality_violation() {
        return Err(Error::Verification(format!(
            "symmetrized hypothesis {h} is not antipodal at {x}"
        )));
    }
    Ok(out)
}

/// `h^a(x, y) = y · h(x)` on the standard doubled domain.
pub fn antipodal_extension(class: &ConceptClass) -> Result<PairedClass> {
    class.require_total()?;
    let n = class.domain_size();
    let hyps = class
        .hypotheses()
        .iter()
        .map(|h| {
            let labels: Vec<Label> = (0..2 * n)
                .map(|i| Label::from(if i < n { h.sign(i) } else { -h.sign(i - n) }))
                .collect();
            PartialHypothesis::from_labels(&labels)
        })
        .collect();
    let out = PairedClass::new(AntipodalDomain::standard(n), ConceptClass::new(2 * n, hyps)?)?;
    if let Some((h, x)) = out.antipodality_violation() {
        return Err(Error::Verification(format!("extension {h} is not antipodal at {x}")));
    }
    Ok(out)
}

/// Restriction of an antipodal class to the image of the representation map.
pub fn representatives_restriction(pc: &PairedClass) -> Result<ConceptClass> {
    if let Some((h, x)) = pc.antipodality_violation() {
        return Err(Error::Precondition(format!("class is not antipodal: hypothesis {h} at point {x}")));
    }
    pc.class.restrict(&pc.domain.representatives())
}

/// A class on the vertices of a sphere template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disambiguation {
    pub paired: PairedClass,
    pub template: SphereTemplate,
}

fn template_matches(d: &Disambiguation) -> Result<()> {
    let k = &d.template.complex;
    if d.paired.domain.size() != k.vertex_count() || d.paired.domain.involution() != k.involution() {
        return Err(Error::DomainMismatch(
            "disambiguation domain does not match the template vertices and antipodes".into(),
        ));
    }
    Ok(())
}

fn covers(class: &ConceptClass, k: &AntipodalComplex, s: &BitSet, antipodal: bool) -> bool {
    class.hypotheses().iter().any(|h| {
        s.iter().all(|v| h.is_plus(v)) && (antipodal || s.iter().all(|v| !h.is_plus(k.antipode(v))))
    })
}

/// Returns the first simplex not disambiguated. For antipodal classes only
/// maximal simplices are checked; otherwise all faces are.
pub fn check_disambiguates(d: &Disambiguation) -> Result<Option<Vec<usize>>> {
    template_matches(d)?;
    let k = &d.template.complex;
    let class = &d.paired.class;
    if d.paired.is_antipodal() {
        return Ok(k
            .maximal_simplices()
            .iter()
            .find(|s| !covers(class, k, s, true))
            .map(|s| s.to_vec()));
    }
    Ok(faces(k.complex(), FACE_CAP)?
        .into_iter()
        .find(|s| !covers(class, k, s, false))
        .map(|s| s.to_vec()))
}

/// Any disambiguation of an `n`-sphere needs at least `n + 2` concepts.
fn check_size_floor(d: &Disambiguation) -> Result<()> {
    let floor = d.template.dim() + 2;
    if (d.paired.class.len() as isize) < floor {
        return Err(Error::Verification(format!(
            "disambiguation of a {}-sphere has {} concepts, fewer than {floor}",
            d.template.dim(),
            d.paired.class.len()
        )));
    }
    Ok(())
}

/// Pulls the antipodal extension back along the witness map:
/// `h_β(v) = y · h(x)` where `β(v) = (x, y)`.
pub fn pullback_disambiguation(w: &SphereWitness, class: &ConceptClass) -> Result<Disambiguation> {
    class.require_total()?;
    if let Some(f) = verify_witness(w).failure {
        return Err(Error::Verification(format!("witness does not verify: {f}")));
    }
    if w.target != delta_ant(class)? {
        return Err(Error::DomainMismatch("witness target is not the antipodal complex of the class".into()));
    }
    let images: Vec<(usize, Sign)> = w
        .vertex_map
        .iter()
        .map(|&u| {
            w.target.vertices()[u]
                .as_point()
                .ok_or_else(|| Error::Verification(format!("target vertex {u} is not a domain point")))
        })
        .collect::<Result<_>>()?;
    let hyps = class
        .hypotheses()
        .iter()
        .map(|h| {
            let signs: Vec<Sign> = images.iter().map(|&(x, y)| y.times(h.sign(x))).collect();
            PartialHypothesis::from_signs(&signs)
        })
        .collect();
    let domain = AntipodalDomain::with_default_rep(w.template.complex.involution().to_vec())?;
    let n = domain.size();
    let d = Disambiguation {
        paired: PairedClass::new(domain, ConceptClass::new_dedup(n, hyps)?)?,
        template: w.template.clone(),
    };
    if let Some((h, x)) = d.paired.antipodality_violation() {
        return Err(Error::Verification(format!("pullback hypothesis {h} is not antipodal at {x}")));
    }
    if let Some(s) = check_disambiguates(&d)? {
        return Err(Error::Verification(format!("pullback misses simplex {s:?}")));
    }
    check_size_floor(&d)?;
    Ok(d)
}

/// `β(v) = (r(v), +)` if `v` represents its pair, `(r(v), -)` otherwise,
/// into the antipodal complex of the restriction to representatives.
/// Returns the witness and the restricted class it lives in.
pub fn sphere_from_disambiguation(d: &Disambiguation) -> Result<(SphereWitness, ConceptClass)> {
    template_matches(d)?;
    if let Some((h, x)) = d.paired.antipodality_violation() {
        return Err(Error::Precondition(format!("disambiguation is not antipodal: hypothesis {h} at {x}")));
    }
    if let Some(s) = check_disambiguates(d)? {
        return Err(Error::Precondition(format!("class does not disambiguate simplex {s:?}")));
    }
    let reps = d.paired.domain.representatives();
    let mut pos = vec![usize::MAX; d.paired.domain.size()];
    for (i, &r) in reps.iter().enumerate() {
        pos[r] = i;
    }
    let restricted = representatives_restriction(&d.paired)?;
    let target = delta_ant(&restricted)?;
    let vertex_map = (0..d.paired.domain.size())
        .map(|v| {
            let r = d.paired.domain.rep(v);
            let label = VertexLabel::point(pos[r], Sign::from_bool(r == v));
            target
                .index_of(&label)
                .ok_or_else(|| Error::Verification(format!("{label} is not in the antipodal complex")))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = SphereWitness {
        template: d.template.clone(),
        vertex_map,
        target,
        embedded: true,
    }
    .certified()?;
    Ok((w, restricted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{dimension, family_class, parse_class, DimensionVariant, Family};
    use crate::spheres::{barycentric_witness, crosspolytope_witness, TemplateKind};

    #[test]
    fn domain_validation() {
        assert!(AntipodalDomain::new(vec![1, 0], vec![0, 0]).is_ok());
        assert!(AntipodalDomain::new(vec![0, 1], vec![0, 1]).is_err());
        assert!(AntipodalDomain::new(vec![1, 0], vec![0, 1]).is_err());
        assert_eq!(AntipodalDomain::standard(2).representatives(), vec![0, 1]);
    }

    #[test]
    fn extension_round_trips() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let ext = antipodal_extension(&c2).unwrap();
        assert!(ext.is_antipodal());
        assert_eq!(representatives_restriction(&ext).unwrap(), c2);
        assert_eq!(symmetrize(&ext).unwrap(), ext);
        let single = antipodal_extension(&parse_class("+-").unwrap()).unwrap();
        assert_eq!(single.class.len(), 1);
    }

    #[test]
    fn symmetrize_third_case() {
        // h(x) = h(-x) = + with r(x) = x gives + at x and - at -x.
        let pc = PairedClass::new(
            AntipodalDomain::new(vec![1, 0], vec![0, 0]).unwrap(),
            parse_class("++").unwrap(),
        )
        .unwrap();
        assert_eq!(symmetrize(&pc).unwrap().class.sorted_rows(), vec!["+-"]);
        assert!(representatives_restriction(&pc).is_err());
    }

    #[test]
    fn pullback_and_back_cube() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let w = crosspolytope_witness(&c2, &[0, 1]).unwrap();
        let d = pullback_disambiguation(&w, &c2).unwrap();
        assert_eq!(d.template.kind, TemplateKind::Crosspolytope(1));
        assert!(d.paired.class.len() <= c2.len());
        let (w2, restricted) = sphere_from_disambiguation(&d).unwrap();
        assert!(w2.verify().ok());
        assert_eq!(w2.dim(), 1);
        assert!(dimension(&restricted, DimensionVariant::Primal).unwrap() <= 2);
    }

    #[test]
    fn pullback_universal_hexagon() {
        let u3 = family_class(Family::Universal, 3, None).unwrap();
        let w = barycentric_witness(&u3, &[0, 1, 2]).unwrap();
        let d = pullback_disambiguation(&w, &u3).unwrap();
        assert_eq!(d.template.complex.vertex_count(), 6);
        assert!(sphere_from_disambiguation(&d).unwrap().0.verify().ok());
    }

    #[test]
    fn point_witness_gives_two_points() {
        let c = parse_class("+\n-").unwrap();
        let w = crosspolytope_witness(&c, &[0]).unwrap();
        let d = pullback_disambiguation(&w, &c).unwrap();
        assert_eq!(d.paired.domain.size(), 2);
    }

    #[test]
    fn quadrant_disambiguation_of_square() {
        let template = SphereTemplate::new(TemplateKind::Crosspolytope(1)).unwrap();
        // Vertices [0,-],[0,+],[1,-],[1,+]; one concept per quadrant.
        let class = parse_class("-+-+\n-++-\n+--+\n+-+-").unwrap();
        let domain = AntipodalDomain::with_default_rep(template.complex.involution().to_vec()).unwrap();
        let d = Disambiguation {
            paired: PairedClass::new(domain, class).unwrap(),
            template,
        };
        assert_eq!(check_disambiguates(&d).unwrap(), None);
        let (w, _) = sphere_from_disambiguation(&d).unwrap();
        assert!(w.embedded && w.verify().ok());

        let mut missing = d.clone();
        missing.paired.class = parse_class("-+-+\n-++-\n+--+").unwrap();
        assert_eq!(check_disambiguates(&missing).unwrap(), Some(vec![0, 2]));
        assert!(sphere_from_disambiguation(&missing).is_err());
    }

    #[test]
    fn non_antipodal_checks_all_faces() {
        let template = SphereTemplate::new(TemplateKind::Crosspolytope(0)).unwrap();
        let domain = AntipodalDomain::with_default_rep(vec![1, 0]).unwrap();
        let d = Disambiguation {
            paired: PairedClass::new(domain, parse_class("++\n+-\n-+").unwrap()).unwrap(),
            template,
        };
        assert!(!d.paired.is_antipodal());
        assert_eq!(check_disambiguates(&d).unwrap(), None);
        assert!(sphere_from_disambiguation(&d).is_err());
    }
}
