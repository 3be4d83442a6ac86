use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::complex::{delta_ant, VertexLabel};
use crate::concept::{shatters, ConceptClass, Sign};
use crate::error::{Error, Result};
use crate::spheres::{SphereTemplate, SphereWitness, TemplateKind};

/// The mutually exclusive cases for classes of VC dimension at most one.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowVcClassification {
    Singleton,
    /// After multiplying point `x` by `flip[x]`, every concept is `+` on a
    /// prefix of `order` and `-` after it.
    ThresholdLike {
        flip: Vec<Sign>,
        order: Vec<usize>,
    },
    /// A hexagon in the antipodal complex.
    Vc1NonThreshold {
        witness: SphereWitness,
    },
    Vc2Plus {
        pair: [usize; 2],
    },
}

impl LowVcClassification {
    pub fn bucket(&self) -> &'static str {
        match self {
            LowVcClassification::Singleton => "singleton",
            LowVcClassification::ThresholdLike { .. } => "threshold_like",
            LowVcClassification::Vc1NonThreshold { .. } => "vc1_non_threshold",
            LowVcClassification::Vc2Plus { .. } => "vc2_plus",
        }
    }
}

/// Checks a bit-flip and order against every concept of the class.
pub fn threshold_certificate_holds(class: &ConceptClass, flip: &[Sign], order: &[usize]) -> bool {
    let n = class.domain_size();
    if flip.len() != n || order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in order {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    class.hypotheses().iter().all(|h| {
        if !h.is_total() {
            return false;
        }
        let k = order.iter().take_while(|&&x| h.sign(x).times(flip[x]).is_plus()).count();
        order[k..].iter().all(|&x| !h.sign(x).times(flip[x]).is_plus())
    })
}

/// Positions of the six vertices of the hexagon inside `B^1`, going round
/// the cycle `{0},{01},{1},{12},{2},{02}`.
fn hexagon_positions() -> HashMap<Vec<usize>, usize> {
    [vec![0], vec![0, 1], vec![1], vec![1, 2], vec![2], vec![0, 2]]
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect()
}

fn hexagon_witness(class: &ConceptClass, cycle: [(usize, Sign); 6]) -> Result<SphereWitness> {
    let template = SphereTemplate::new(TemplateKind::BarycentricBoundary(1))?;
    let target = delta_ant(class)?;
    let pos = hexagon_positions();
    let vertex_map = template
        .complex
        .vertices()
        .iter()
        .map(|l| {
            let VertexLabel::Subset(t) = l else {
                unreachable!("barycentric labels")
            };
            let (x, y) = cycle[pos[t]];
            target
                .index_of(&VertexLabel::point(x, y))
                .ok_or_else(|| Error::Verification(format!("({x},{y}) is not a vertex of the antipodal complex")))
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

/// Threshold ordering from a flip: points by decreasing number of positive
/// concepts, ties by index.
fn order_for(class: &ConceptClass, flip: &[Sign]) -> Vec<usize> {
    let m = class.len();
    let mut order: Vec<usize> = (0..class.domain_size()).collect();
    let plus: Vec<usize> = (0..class.domain_size())
        .map(|x| (0..m).filter(|&h| class.value(h, x).times(flip[x]).is_plus()).count())
        .collect();
    order.sort_by_key(|&x| (std::cmp::Reverse(plus[x]), x));
    order
}

/// Sorts a class into the four cases, following the order-theoretic proof:
/// flip so that one concept is all `+`, quotient equal columns, and compare
/// points by `x <= z` iff `{(x,-),(z,+)}` is not realizable.
pub fn classify_low_vc(class: &ConceptClass) -> Result<LowVcClassification> {
    class.require_total()?;
    let n = class.domain_size();
    if class.len() == 1 {
        return Ok(LowVcClassification::Singleton);
    }
    for a in 0..n {
        for b in a + 1..n {
            if shatters(class, &[a, b])? {
                return Ok(LowVcClassification::Vc2Plus { pair: [a, b] });
            }
        }
    }

    let p0: Vec<Sign> = (0..n).map(|x| class.value(0, x)).collect();
    let flipped = class.flip(&p0);
    let cols = flipped.columns();
    let m = class.len();
    let neg: Vec<BitSet> = cols.iter().map(|c| c.complement()).collect();
    let mut reps: Vec<usize> = Vec::new();
    let mut rep_of = vec![usize::MAX; n];
    for x in 0..n {
        if cols[x].count() == m {
            continue;
        }
        match reps.iter().find(|&&r| cols[r] == cols[x]) {
            Some(&r) => rep_of[x] = r,
            None => {
                rep_of[x] = x;
                reps.push(x);
            }
        }
    }
    let le = |x: usize, z: usize| neg[x].is_subset(&neg[z]);
    let incomparable = |x: usize, z: usize| !le(x, z) && !le(z, x);
    let back = |x: usize, y: Sign| (x, y.times(p0[x]));

    let pairs: Vec<(usize, usize)> = reps
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| reps[i + 1..].iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| incomparable(a, b))
        .collect();

    let flip = if pairs.is_empty() {
        p0.clone()
    } else {
        for &(z1, z2) in &pairs {
            if let Some(&x) = reps.iter().find(|&&x| le(z1, x) && le(z2, x)) {
                use Sign::{Minus as M, Plus as P};
                let cycle = [(x, P), (z2, P), (z1, M), (x, M), (z2, M), (z1, P)].map(|(v, s)| back(v, s));
                return Ok(LowVcClassification::Vc1NonThreshold {
                    witness: hexagon_witness(class, cycle)?,
                });
            }
        }
        for &(x, z) in &pairs {
            if let Some(&w) = reps.iter().find(|&&w| w > z && incomparable(x, w) && incomparable(z, w)) {
                use Sign::{Minus as M, Plus as P};
                let cycle = [(x, P), (z, M), (w, P), (x, M), (z, P), (w, M)].map(|(v, s)| back(v, s));
                return Ok(LowVcClassification::Vc1NonThreshold {
                    witness: hexagon_witness(class, cycle)?,
                });
            }
        }
        // Two chains: keep the chain through a minimal element, negate the other.
        let bottom = *reps
            .iter()
            .min_by_key(|&&x| (neg[x].count(), x))
            .expect("an incomparable pair exists");
        (0..n)
            .map(|x| {
                let r = rep_of[x];
                if r == usize::MAX || !incomparable(bottom, r) {
                    p0[x]
                } else {
                    -p0[x]
                }
            })
            .collect()
    };
    // `flip` and its negative both work; report the one that is `+` at point 0.
    let flip: Vec<Sign> = if flip.first() == Some(&Sign::Minus) {
        flip.iter().map(|&s| -s).collect()
    } else {
        flip
    };
    let order = order_for(class, &flip);
    if !threshold_certificate_holds(class, &flip, &order) {
        return Err(Error::Verification(
            "no hexagon found but the two-chain flip does not give a threshold embedding".into(),
        ));
    }
    Ok(LowVcClassification::ThresholdLike { flip, order })
}
