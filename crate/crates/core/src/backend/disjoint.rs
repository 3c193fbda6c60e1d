//! Two disjoint unions of finite sets, taken literally.
//!
//! The tagged union `{(a,0) : a in A} u {(b,1) : b in B}` comes with
//! injections and copairing and is a coproduct, but is neither commutative
//! nor associative as a set operation. The counting union `{n : n < |A|+|B|}`
//! is literally commutative and associative, but has no injections and does
//! not fix `A = A u 0` unless `A` is already a natural number.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::morphism::{ConcreteMorphism, MorphismError};

/// Element of a hereditarily finite universe rich enough to hold labels,
/// naturals and tagged pairs side by side, so that results of the two
/// unions can be compared with plain set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Label(String),
    Nat(usize),
    Tagged(Box<Elem>, u64),
}

impl Elem {
    pub fn label(s: &str) -> Elem {
        Elem::Label(s.to_string())
    }

    pub fn tagged(e: Elem, tag: u64) -> Elem {
        Elem::Tagged(Box::new(e), tag)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Label(s) => f.write_str(s),
            Elem::Nat(n) => write!(f, "{n}"),
            Elem::Tagged(e, t) => write!(f, "({e},{t})"),
        }
    }
}

pub type FinSet = BTreeSet<Elem>;

/// Renders `{x, y, z}` in the set's order.
pub fn show_set(set: &FinSet) -> String {
    let items: Vec<String> = set.iter().map(Elem::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn def1_union(a: &FinSet, b: &FinSet) -> FinSet {
    def1_union_with_tags(a, b, (0, 1))
}

/// Tagged union with arbitrary distinct tags.
///
/// Panics if the tags coincide.
pub fn def1_union_with_tags(a: &FinSet, b: &FinSet, tags: (u64, u64)) -> FinSet {
    assert_ne!(tags.0, tags.1, "tags must differ for the union to be disjoint");
    a.iter()
        .map(|x| Elem::tagged(x.clone(), tags.0))
        .chain(b.iter().map(|y| Elem::tagged(y.clone(), tags.1)))
        .collect()
}

pub fn def1_inl(a: &Elem) -> Elem {
    Elem::tagged(a.clone(), 0)
}

pub fn def1_inr(b: &Elem) -> Elem {
    Elem::tagged(b.clone(), 1)
}

/// The map out of `def1_union(A, B)` that agrees with `f` on left-tagged
/// and with `g` on right-tagged elements.
pub fn def1_copair(f: &BTreeMap<Elem, Elem>, g: &BTreeMap<Elem, Elem>) -> BTreeMap<Elem, Elem> {
    f.iter()
        .map(|(x, y)| (def1_inl(x), y.clone()))
        .chain(g.iter().map(|(x, y)| (def1_inr(x), y.clone())))
        .collect()
}

pub fn def2_union(a: &FinSet, b: &FinSet) -> FinSet {
    (0..a.len() + b.len()).map(Elem::Nat).collect()
}

/// `Some(k)` when the set is exactly `{0, ..., k-1}`, i.e. the natural number `k`.
pub fn as_number(set: &FinSet) -> Option<usize> {
    set.iter()
        .enumerate()
        .all(|(i, e)| *e == Elem::Nat(i))
        .then_some(set.len())
}

/// The unique `h` with `h . inl = f` and `h . inr = g`.
pub fn copair_universal(f: &ConcreteMorphism, g: &ConcreteMorphism) -> Result<ConcreteMorphism, MorphismError> {
    ConcreteMorphism::copair(f, g)
}
