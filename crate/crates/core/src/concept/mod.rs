//! Finite concept classes over `{-,+}` and partial hypotheses over `{-,+,*}`.

mod families;
mod order;
mod shatter;

use std::collections::HashMap;
use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{check_cap, Error, Result};

pub use families::{family_class, Family, MAX_CUBE_N, MAX_UNIVERSAL_DOMAIN};
pub use order::{search_class_leq, verify_class_leq, ClassLeqWitness, CLASS_LEQ_BUDGET};
pub use shatter::{
    antipodally_shatters, dimension, dimensions, largest_shattered_set, shattered_sets,
    shatters, strongly_shattered_sets, strongly_shatters, Combinations, DimensionVariant,
    Dimensions,
};

/// Default cap on the number of hypotheses a product may create.
pub const DEFAULT_MAX_HYPOTHESES: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_bool(plus: bool) -> Sign {
        if plus {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Minus),
            '+' => Some(Sign::Plus),
            _ => None,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        Sign::from_bool(self == other)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Minus,
    Plus,
    Star,
}

impl Label {
    pub fn as_char(self) -> char {
        match self {
            Label::Minus => '-',
            Label::Plus => '+',
            Label::Star => '*',
        }
    }

    pub fn sign(self) -> Option<Sign> {
        match self {
            Label::Minus => Some(Sign::Minus),
            Label::Plus => Some(Sign::Plus),
            Label::Star => None,
        }
    }
}

impl From<Sign> for Label {
    fn from(s: Sign) -> Label {
        match s {
            Sign::Minus => Label::Minus,
            Sign::Plus => Label::Plus,
        }
    }
}

/// A vector over `{-,+,*}` stored as a value mask and a definedness mask.
/// Undefined positions always carry a zero value bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialHypothesis {
    value: BitSet,
    defined: BitSet,
}

impl PartialHypothesis {
    pub fn total(len: usize, plus: &BitSet) -> Self {
        debug_assert_eq!(plus.len(), len);
        PartialHypothesis {
            value: plus.clone(),
            defined: BitSet::full(len),
        }
    }

    pub fn from_masks(value: BitSet, defined: BitSet) -> Self {
        let value = value.intersection(&defined);
        PartialHypothesis { value, defined }
    }

    pub fn from_signs(signs: &[Sign]) -> Self {
        let plus = BitSet::from_indices(
            signs.len(),
            signs.iter().enumerate().filter(|(_, s)| s.is_plus()).map(|(i, _)| i),
        );
        PartialHypothesis::total(signs.len(), &plus)
    }

    pub fn from_labels(labels: &[Label]) -> Self {
        let n = labels.len();
        let mut value = BitSet::new(n);
        let mut defined = BitSet::new(n);
        for (i, l) in labels.iter().enumerate() {
            match l {
                Label::Plus => {
                    value.insert(i);
                    defined.insert(i);
                }
                Label::Minus => defined.insert(i),
                Label::Star => {}
            }
        }
        PartialHypothesis { value, defined }
    }

    pub fn all_star(len: usize) -> Self {
        PartialHypothesis {
            value: BitSet::new(len),
            defined: BitSet::new(len),
        }
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Label {
        if !self.defined.contains(i) {
            Label::Star
        } else if self.value.contains(i) {
            Label::Plus
        } else {
            Label::Minus
        }
    }

    /// Sign at a defined position. Panics on `*`.
    pub fn sign(&self, i: usize) -> Sign {
        self.get(i).sign().expect("undefined position")
    }

    pub fn is_plus(&self, i: usize) -> bool {
        self.value.contains(i)
    }

    pub fn set(&mut self, i: usize, l: Label) {
        match l {
            Label::Star => {
                self.defined.remove(i);
                self.value.remove(i);
            }
            Label::Plus => {
                self.defined.insert(i);
                self.value.insert(i);
            }
            Label::Minus => {
                self.defined.insert(i);
                self.value.remove(i);
            }
        }
    }

    pub fn value_mask(&self) -> &BitSet {
        &self.value
    }

    pub fn support(&self) -> &BitSet {
        &self.defined
    }

    pub fn is_total(&self) -> bool {
        self.defined.is_full()
    }

    /// Number of free (`*`) coordinates.
    pub fn dim(&self) -> usize {
        self.len() - self.defined.count()
    }

    /// True when `self` agrees with `other` wherever `other` is defined.
    pub fn extends(&self, other: &PartialHypothesis) -> bool {
        other.defined.is_subset(&self.defined)
            && self
                .value
                .intersection(&other.defined)
                .eq(&other.value)
    }

    pub fn negate(&self) -> PartialHypothesis {
        PartialHypothesis {
            value: self.defined.difference(&self.value),
            defined: self.defined.clone(),
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for PartialHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartialHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for PartialHypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut labels = Vec::with_capacity(s.len());
        for (col, ch) in s.chars().enumerate() {
            labels.push(match ch {
                '+' => Label::Plus,
                '-' => Label::Minus,
                '*' => Label::Star,
                _ => {
                    return Err(Error::IllegalChar {
                        line: 1,
                        col: col + 1,
                        ch,
                    })
                }
            });
        }
        Ok(PartialHypothesis::from_labels(&labels))
    }
}

/// Orders by dimension, then by the label string with `- < * < +`.
impl Ord for PartialHypothesis {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        fn rank(l: Label) -> u8 {
            match l {
                Label::Minus => 0,
                Label::Star => 1,
                Label::Plus => 2,
            }
        }
        self.dim().cmp(&other.dim()).then_with(|| {
            (0..self.len())
                .map(|i| rank(self.get(i)))
                .cmp((0..other.len()).map(|i| rank(other.get(i))))
        })
    }
}

impl Serialize for PartialHypothesis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialHypothesis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for PartialHypothesis {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A nonempty, duplicate-free list of hypotheses on `n` domain points.
#[derive(Clone, PartialEq, Eq)]
pub struct ConceptClass {
    n: usize,
    hyps: Vec<PartialHypothesis>,
    partial: bool,
}

impl fmt::Debug for ConceptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConceptClass")
            .field("n", &self.n)
            .field("hyps", &self.hyps)
            .finish()
    }
}

impl ConceptClass {
    pub fn new(n: usize, hyps: Vec<PartialHypothesis>) -> Result<Self> {
        if hyps.is_empty() {
            return Err(Error::EmptyClass);
        }
        let mut seen: HashMap<&PartialHypothesis, usize> = HashMap::with_capacity(hyps.len());
        let mut partial = false;
        for (i, h) in hyps.iter().enumerate() {
            if h.len() != n {
                return Err(Error::RaggedRows {
                    line: i + 1,
                    expected: n,
                    found: h.len(),
                });
            }
            if let Some(&j) = seen.get(h) {
                return Err(Error::DuplicateHypothesis {
                    first: j + 1,
                    second: i + 1,
                });
            }
            seen.insert(h, i);
            partial |= !h.is_total();
        }
        Ok(ConceptClass { n, hyps, partial })
    }

    /// Builds a class, silently dropping repeated hypotheses after the first.
    pub fn new_dedup(n: usize, hyps: Vec<PartialHypothesis>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(hyps.len());
        let hyps = hyps.into_iter().filter(|h| seen.insert(h.clone())).collect();
        ConceptClass::new(n, hyps)
    }

    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let text = rows.iter().map(|r| r.as_ref()).collect::<Vec<_>>().join("\n");
        parse_class(&text)
    }

    pub fn domain_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.hyps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyps.is_empty()
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn hypotheses(&self) -> &[PartialHypothesis] {
        &self.hyps
    }

    pub fn hypothesis(&self, i: usize) -> &PartialHypothesis {
        &self.hyps[i]
    }

    pub fn require_total(&self) -> Result<()> {
        match self.hyps.iter().position(|h| !h.is_total()) {
            Some(row) => Err(Error::PartialClass { row: row + 1 }),
            None => Ok(()),
        }
    }

    pub fn value(&self, h: usize, x: usize) -> Sign {
        self.hyps[h].sign(x)
    }

    pub fn position(&self, h: &PartialHypothesis) -> Option<usize> {
        self.hyps.iter().position(|g| g == h)
    }

    pub fn contains(&self, h: &PartialHypothesis) -> bool {
        self.position(h).is_some()
    }

    /// A partial hypothesis is realizable if some concept extends it.
    pub fn realizes(&self, h: &PartialHypothesis) -> bool {
        self.hyps.iter().any(|g| g.extends(h))
    }

    /// Column of point `x` as a bitset over hypotheses (bit set means `+`).
    pub fn column(&self, x: usize) -> BitSet {
        BitSet::from_indices(
            self.hyps.len(),
            self.hyps
                .iter()
                .enumerate()
                .filter(|(_, h)| h.is_plus(x))
                .map(|(i, _)| i),
        )
    }

    pub fn columns(&self) -> Vec<BitSet> {
        let m = self.hyps.len();
        let mut cols = vec![BitSet::new(m); self.n];
        for (j, h) in self.hyps.iter().enumerate() {
            for x in h.value_mask().iter() {
                cols[x].insert(j);
            }
        }
        cols
    }

    /// Restriction to the listed points (in that order), duplicates collapsed.
    pub fn restrict(&self, points: &[usize]) -> Result<ConceptClass> {
        for &x in points {
            if x >= self.n {
                return Err(Error::IndexOutOfRange {
                    what: "domain",
                    index: x,
                    len: self.n,
                });
            }
        }
        let hyps = self
            .hyps
            .iter()
            .map(|h| PartialHypothesis::from_labels(&points.iter().map(|&x| h.get(x)).collect::<Vec<_>>()))
            .collect();
        ConceptClass::new_dedup(points.len(), hyps)
    }

    /// Pointwise product of every hypothesis with the sign vector `p`.
    pub fn flip(&self, p: &[Sign]) -> ConceptClass {
        assert_eq!(p.len(), self.n);
        let hyps = self
            .hyps
            .iter()
            .map(|h| {
                let labels: Vec<Label> = (0..self.n)
                    .map(|x| match h.get(x).sign() {
                        Some(s) => Label::from(s.times(p[x])),
                        None => Label::Star,
                    })
                    .collect();
                PartialHypothesis::from_labels(&labels)
            })
            .collect();
        ConceptClass {
            n: self.n,
            hyps,
            partial: self.partial,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for h in &self.hyps {
            s.push_str(&h.to_string());
            s.push('\n');
        }
        s
    }

    /// Hypothesis strings in sorted order; equal iff the classes agree as sets.
    pub fn sorted_rows(&self) -> Vec<String> {
        let mut rows: Vec<String> = self.hyps.iter().map(|h| h.to_string()).collect();
        rows.sort();
        rows
    }

    /// True if some permutation of the domain maps one hypothesis set onto the other.
    /// Exhaustive over permutations; intended for small domains.
    pub fn equivalent_up_to_relabeling(&self, other: &ConceptClass) -> bool {
        if self.n != other.n || self.len() != other.len() {
            return false;
        }
        let target: std::collections::HashSet<String> =
            other.hyps.iter().map(|h| h.to_string()).collect();
        let mut perm: Vec<usize> = (0..self.n).collect();
        loop {
            if self.hyps.iter().all(|h| {
                let s: String = perm.iter().map(|&x| h.get(x).as_char()).collect();
                target.contains(&s)
            }) {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Parses the line-oriented class format. Lines starting with `#` and blank
/// lines are skipped; every other line is one hypothesis.
pub fn parse_class(text: &str) -> Result<ConceptClass> {
    let mut hyps = Vec::new();
    let mut lines_of = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut labels = Vec::with_capacity(line.len());
        for (col, ch) in line.chars().enumerate() {
            labels.push(match ch {
                '+' => Label::Plus,
                '-' => Label::Minus,
                '*' => Label::Star,
                _ => {
                    return Err(Error::IllegalChar {
                        line: lineno + 1,
                        col: col + 1,
                        ch,
                    })
                }
            });
        }
        match width {
            None => width = Some(labels.len()),
            Some(w) if w != labels.len() => {
                return Err(Error::RaggedRows {
                    line: lineno + 1,
                    expected: w,
                    found: labels.len(),
                })
            }
            _ => {}
        }
        hyps.push(PartialHypothesis::from_labels(&labels));
        lines_of.push(lineno + 1);
    }
    let n = width.ok_or(Error::EmptyClass)?;
    ConceptClass::new(n, hyps).map_err(|e| match e {
        Error::DuplicateHypothesis { first, second } => Error::DuplicateHypothesis {
            first: lines_of[first - 1],
            second: lines_of[second - 1],
        },
        e => e,
    })
}

/// Result of dualizing: the dual class plus, for every original domain point,
/// the index of the dual hypothesis its column became.
#[derive(Clone, Debug)]
pub struct DualClass {
    pub class: ConceptClass,
    pub collapse: Vec<usize>,
}

/// Domain of the dual is the hypothesis list; each distinct column becomes one
/// dual hypothesis, in order of first occurrence.
pub fn dual_class(class: &ConceptClass) -> Result<DualClass> {
    class.require_total()?;
    let m = class.len();
    let mut index: HashMap<BitSet, usize> = HashMap::new();
    let mut hyps = Vec::new();
    let mut collapse = Vec::with_capacity(class.domain_size());
    for col in class.columns() {
        let next = hyps.len();
        let id = *index.entry(col.clone()).or_insert_with(|| {
            hyps.push(PartialHypothesis::total(m, &col));
            next
        });
        collapse.push(id);
    }
    let class = ConceptClass::new(m, hyps)?;
    Ok(DualClass { class, collapse })
}

/// Concatenated domains; hypothesis `i * |b| + j` is `a_i` followed by `b_j`.
pub fn product_class(a: &ConceptClass, b: &ConceptClass, max_hypotheses: usize) -> Result<ConceptClass> {
    a.require_total()?;
    b.require_total()?;
    let count = (a.len() as u64).saturating_mul(b.len() as u64);
    check_cap("product hypothesis count", count, max_hypotheses as u64)?;
    let (na, nb) = (a.domain_size(), b.domain_size());
    let mut hyps = Vec::with_capacity(count as usize);
    for h in a.hypotheses() {
        for g in b.hypotheses() {
            let plus = BitSet::from_indices(
                na + nb,
                h.value_mask().iter().chain(g.value_mask().iter().map(|x| x + na)),
            );
            hyps.push(PartialHypothesis::total(na + nb, &plus));
        }
    }
    ConceptClass::new(na + nb, hyps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_cube_listing() {
        let c = parse_class("--\n-+\n+-\n++").unwrap();
        assert_eq!(c.domain_size(), 2);
        assert_eq!(c.len(), 4);
        assert!(!c.is_partial());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_class("+-\n+-"),
            Err(Error::DuplicateHypothesis { first: 1, second: 2 })
        ));
        assert!(matches!(parse_class("+-\n+"), Err(Error::RaggedRows { line: 2, .. })));
        assert!(matches!(parse_class("# only a comment\n"), Err(Error::EmptyClass)));
        assert!(matches!(parse_class(""), Err(Error::EmptyClass)));
        assert!(matches!(
            parse_class("+x"),
            Err(Error::IllegalChar { line: 1, col: 2, ch: 'x' })
        ));
    }

    #[test]
    fn comments_and_partial_rows() {
        let c = parse_class("# header\n+*\n\n-+\n").unwrap();
        assert!(c.is_partial());
        assert_eq!(c.hypothesis(0).dim(), 1);
        assert!(c.require_total().is_err());
    }

    #[test]
    fn duplicate_error_reports_file_lines() {
        let e = parse_class("#c\n+-\n#c\n+-").unwrap_err();
        assert!(matches!(e, Error::DuplicateHypothesis { first: 2, second: 4 }));
    }

    #[test]
    fn extension_order() {
        let h: PartialHypothesis = "+*-".parse().unwrap();
        let g: PartialHypothesis = "++-".parse().unwrap();
        assert!(g.extends(&h));
        assert!(!h.extends(&g));
        assert!(h.extends(&PartialHypothesis::all_star(3)));
        assert_eq!(h.negate().to_string(), "-*+");
        assert_eq!(h.dim(), 1);
    }

    #[test]
    fn dual_of_singleton_has_one_point() {
        let c = parse_class("+-+").unwrap();
        let d = dual_class(&c).unwrap();
        assert_eq!(d.class.domain_size(), 1);
        assert_eq!(d.class.len(), 2);
        assert_eq!(d.collapse, vec![0, 1, 0]);
    }

    #[test]
    fn double_dual_of_cube() {
        let c2 = family_class(Family::Cube, 2, None).unwrap();
        let dd = dual_class(&dual_class(&c2).unwrap().class).unwrap().class;
        assert!(dd.equivalent_up_to_relabeling(&c2));
    }

    #[test]
    fn dual_of_cube_is_universal() {
        for n in 1..=4 {
            let c = family_class(Family::Cube, n, None).unwrap();
            let u = family_class(Family::Universal, n, None).unwrap();
            let d = dual_class(&c).unwrap().class;
            assert_eq!(d.domain_size(), u.domain_size());
            assert_eq!(d.sorted_rows(), u.sorted_rows());
        }
    }

    #[test]
    fn products() {
        let c1 = family_class(Family::Cube, 1, None).unwrap();
        let p = product_class(&c1, &c1, DEFAULT_MAX_HYPOTHESES).unwrap();
        assert!(p.equivalent_up_to_relabeling(&family_class(Family::Cube, 2, None).unwrap()));
        let u2 = family_class(Family::Universal, 2, None).unwrap();
        let q = product_class(&u2, &u2, DEFAULT_MAX_HYPOTHESES).unwrap();
        assert_eq!((q.len(), q.domain_size()), (4, 8));
        assert!(product_class(&c1, &c1, 3).unwrap_err().is_budget());
    }

    #[test]
    fn flip_and_restrict() {
        let c = parse_class("+-\n--").unwrap();
        let f = c.flip(&[Sign::Minus, Sign::Plus]);
        assert_eq!(f.sorted_rows(), vec!["+-", "--"]);
        let r = c.restrict(&[1]).unwrap();
        assert_eq!(r.len(), 1);
    }
}
