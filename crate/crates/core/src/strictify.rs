//! Distributive normal forms with witnesses.
//!
//! A shape is expanded into a right-nested sum of right-nested products of
//! variables, with `0` and `I` eliminated. Alongside the normal form we build
//! a witness term from the shape to it, using only associators, unitors,
//! distributors and absorbers. Normalization never commutes anything:
//! monomials appear in the order distribution produces them, and duplicate
//! monomials stay separate summands.

use std::fmt;

use crate::shape::Shape;
use crate::witness::{GenKind, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    /// Each inner list is a product of variables; `[]` is `I`. An empty
    /// outer list is `0`.
    pub monomials: Vec<Vec<String>>,
}

impl NormalForm {
    /// Reads the normal form back as a shape, right-nested at both levels.
    pub fn to_shape(&self) -> Shape {
        sum_shape(&self.monomials.iter().map(|m| mono_shape(m)).collect::<Vec<_>>())
    }
}

/// `A*B + A*C`, `I` for an empty monomial, `0` for an empty sum.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_empty() {
                f.write_str("I")?;
            } else {
                f.write_str(&m.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Side {
    Left,
    Right,
}

/// Which summand was chosen at each `+` node of the input (nodes numbered in
/// pre-order). Identifies a monomial of the expansion independently of the
/// order a strategy emits it in.
type Origin = Vec<(usize, Side)>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Mono {
    factors: Vec<String>,
    origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictifyResult {
    pub nf: NormalForm,
    /// From the input shape to `nf.to_shape()`.
    pub witness: Witness,
    origins: Vec<Origin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strategy {
    /// Distribute over the left factor's summands first: monomials of `S*T`
    /// come out left factor major.
    LeftMajor,
    /// Distribute over the right factor's summands first.
    RightMajor,
}

pub fn normalize(shape: &Shape) -> StrictifyResult {
    run(shape, Strategy::LeftMajor)
}

/// Same monomials as [`normalize`], expanded right factor major; the
/// monomial order (and the witness) can differ.
pub fn alt_normalize(shape: &Shape) -> StrictifyResult {
    run(shape, Strategy::RightMajor)
}

/// Both strategies on one shape together with the witness that reorders
/// the alternative normal form into the primary one, so that
/// `alternative.witness ; reorder` and `primary.witness` denote the same map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyComparison {
    pub primary: StrictifyResult,
    pub alternative: StrictifyResult,
    pub reorder: Witness,
}

pub fn compare_strategies(shape: &Shape) -> StrategyComparison {
    let primary = normalize(shape);
    let alternative = alt_normalize(shape);
    let reorder = reorder_witness(&alternative, &primary).expect("both strategies expand the same shape");
    StrategyComparison {
        primary,
        alternative,
        reorder,
    }
}

/// Witness from `from.nf` to `to.nf`, built from additive braidings and
/// associators, that sends each monomial to the one with the same origin.
/// `None` when the two results do not expand the same shape.
pub fn reorder_witness(from: &StrictifyResult, to: &StrictifyResult) -> Option<Witness> {
    if from.origins.len() != to.origins.len() {
        return None;
    }
    // goal[i] = index in `from` of the monomial that must end up at position i.
    let goal: Vec<usize> = to
        .origins
        .iter()
        .map(|o| from.origins.iter().position(|p| p == o))
        .collect::<Option<_>>()?;
    let mut current: Vec<usize> = (0..goal.len()).collect();
    let mut shapes: Vec<Shape> = from.nf.monomials.iter().map(|m| mono_shape(m)).collect();
    let mut witness = Witness::id(sum_shape(&shapes));
    for (i, &want) in goal.iter().enumerate() {
        let j = current.iter().position(|&c| c == want)?;
        for k in (i..j).rev() {
            witness = then(witness, adjacent_swap(&shapes, k));
            shapes.swap(k, k + 1);
            current.swap(k, k + 1);
        }
    }
    Some(witness)
}

/// Exchanges summands `k` and `k+1` of a right-nested sum.
fn adjacent_swap(shapes: &[Shape], k: usize) -> Witness {
    use GenKind::*;
    let (x, y) = (&shapes[k], &shapes[k + 1]);
    let mut w = if k + 2 == shapes.len() {
        Witness::gen(BPlus, [x.clone(), y.clone()])
    } else {
        let rest = sum_shape(&shapes[k + 2..]);
        Witness::seq([
            Witness::gen(APlusInv, [x.clone(), y.clone(), rest.clone()]),
            Witness::sum_m(Witness::gen(BPlus, [x.clone(), y.clone()]), Witness::id(rest.clone())),
            Witness::gen(APlus, [y.clone(), x.clone(), rest]),
        ])
    };
    for prefix in shapes[..k].iter().rev() {
        w = Witness::sum_m(Witness::id(prefix.clone()), w);
    }
    w
}

fn run(shape: &Shape, strategy: Strategy) -> StrictifyResult {
    let mut next_id = 0;
    let (monos, witness) = expand(shape, strategy, &mut next_id);
    StrictifyResult {
        nf: NormalForm {
            monomials: monos.iter().map(|m| m.factors.clone()).collect(),
        },
        witness,
        origins: monos.into_iter().map(|m| m.origin).collect(),
    }
}

fn expand(shape: &Shape, strategy: Strategy, next_id: &mut usize) -> (Vec<Mono>, Witness) {
    let node = *next_id;
    *next_id += 1;
    match shape {
        Shape::Var(x) => (
            vec![Mono {
                factors: vec![x.clone()],
                origin: Vec::new(),
            }],
            Witness::id(shape.clone()),
        ),
        Shape::Zero => (Vec::new(), Witness::id(Shape::Zero)),
        Shape::One => (
            vec![Mono {
                factors: Vec::new(),
                origin: Vec::new(),
            }],
            Witness::id(Shape::One),
        ),
        Shape::Sum(l, r) => {
            let (mut left, wl) = expand(l, strategy, next_id);
            let (mut right, wr) = expand(r, strategy, next_id);
            for (monos, side) in [(&mut left, Side::Left), (&mut right, Side::Right)] {
                for m in monos.iter_mut() {
                    m.origin.push((node, side));
                    m.origin.sort();
                }
            }
            let w = then(sum_m(wl, wr), append(&left, &right));
            left.extend(right);
            (left, w)
        }
        Shape::Prod(l, r) => {
            let (left, wl) = expand(l, strategy, next_id);
            let (right, wr) = expand(r, strategy, next_id);
            let (monos, wm) = match strategy {
                Strategy::LeftMajor => (product(&left, &right, true), mul_left_major(&left, &right)),
                Strategy::RightMajor => (product(&left, &right, false), mul_right_major(&left, &right)),
            };
            (monos, then(prod_m(wl, wr), wm))
        }
    }
}

fn product(left: &[Mono], right: &[Mono], left_major: bool) -> Vec<Mono> {
    let times = |m: &Mono, n: &Mono| {
        let mut origin = m.origin.clone();
        origin.extend(n.origin.iter().copied());
        origin.sort();
        Mono {
            factors: m.factors.iter().chain(&n.factors).cloned().collect(),
            origin,
        }
    };
    if left_major {
        left.iter()
            .flat_map(|m| right.iter().map(move |n| times(m, n)))
            .collect()
    } else {
        right
            .iter()
            .flat_map(|n| left.iter().map(move |m| times(m, n)))
            .collect()
    }
}

fn mono_shape(factors: &[String]) -> Shape {
    match factors {
        [] => Shape::One,
        [x] => Shape::var(x.clone()),
        [x, rest @ ..] => Shape::prod(Shape::var(x.clone()), mono_shape(rest)),
    }
}

fn sum_shape(summands: &[Shape]) -> Shape {
    match summands {
        [] => Shape::Zero,
        [x] => x.clone(),
        [x, rest @ ..] => Shape::sum(x.clone(), sum_shape(rest)),
    }
}

fn nf_shape(monos: &[Mono]) -> Shape {
    sum_shape(&monos.iter().map(|m| mono_shape(&m.factors)).collect::<Vec<_>>())
}

// Composition helpers that drop identities, so simple inputs get simple witnesses.

fn then(first: Witness, second: Witness) -> Witness {
    match (&first, &second) {
        (Witness::Id(_), _) => second,
        (_, Witness::Id(_)) => first,
        _ => first.then(second),
    }
}

fn sum_m(f: Witness, g: Witness) -> Witness {
    match (f, g) {
        (Witness::Id(a), Witness::Id(b)) => Witness::id(Shape::sum(a, b)),
        (f, g) => Witness::sum_m(f, g),
    }
}

fn prod_m(f: Witness, g: Witness) -> Witness {
    match (f, g) {
        (Witness::Id(a), Witness::Id(b)) => Witness::id(Shape::prod(a, b)),
        (f, g) => Witness::prod_m(f, g),
    }
}

/// `nf(left) + nf(right) -> nf(left ++ right)`.
fn append(left: &[Mono], right: &[Mono]) -> Witness {
    match left {
        [] => Witness::gen(GenKind::LPlus, [nf_shape(right)]),
        _ if right.is_empty() => Witness::gen(GenKind::RPlus, [nf_shape(left)]),
        [_] => Witness::id(Shape::sum(nf_shape(left), nf_shape(right))),
        [m, rest @ ..] => {
            let head = mono_shape(&m.factors);
            then(
                Witness::gen(GenKind::APlus, [head.clone(), nf_shape(rest), nf_shape(right)]),
                sum_m(Witness::id(head), append(rest, right)),
            )
        }
    }
}

/// `mono(m) * mono(n) -> mono(m ++ n)`.
fn mono_mul(m: &[String], n: &[String]) -> Witness {
    let (ms, ns) = (mono_shape(m), mono_shape(n));
    match m {
        [] => Witness::gen(GenKind::LTimes, [ns]),
        _ if n.is_empty() => Witness::gen(GenKind::RTimes, [ms]),
        [_] => Witness::id(Shape::prod(ms, ns)),
        [x, rest @ ..] => then(
            Witness::gen(GenKind::ATimes, [Shape::var(x.clone()), mono_shape(rest), ns]),
            prod_m(Witness::id(Shape::var(x.clone())), mono_mul(rest, n)),
        ),
    }
}

fn mul_left_major(left: &[Mono], right: &[Mono]) -> Witness {
    match left {
        [] => Witness::gen(GenKind::ZeroL, [nf_shape(right)]),
        _ if right.is_empty() => Witness::gen(GenKind::ZeroR, [nf_shape(left)]),
        [m] => mono_times_nf(m, right),
        [m, rest @ ..] => then(
            then(
                Witness::gen(
                    GenKind::DistR,
                    [mono_shape(&m.factors), nf_shape(rest), nf_shape(right)],
                ),
                sum_m(mono_times_nf(m, right), mul_left_major(rest, right)),
            ),
            append(
                &product(std::slice::from_ref(m), right, true),
                &product(rest, right, true),
            ),
        ),
    }
}

/// `mono(m) * nf(right) -> nf(m * right)` for non-empty `right`.
fn mono_times_nf(m: &Mono, right: &[Mono]) -> Witness {
    match right {
        [] => unreachable!("callers handle the empty sum"),
        [n] => mono_mul(&m.factors, &n.factors),
        [n, rest @ ..] => then(
            Witness::gen(
                GenKind::DistL,
                [mono_shape(&m.factors), mono_shape(&n.factors), nf_shape(rest)],
            ),
            sum_m(mono_mul(&m.factors, &n.factors), mono_times_nf(m, rest)),
        ),
    }
}

fn mul_right_major(left: &[Mono], right: &[Mono]) -> Witness {
    match right {
        _ if left.is_empty() => Witness::gen(GenKind::ZeroL, [nf_shape(right)]),
        [] => Witness::gen(GenKind::ZeroR, [nf_shape(left)]),
        [n] => nf_times_mono(left, n),
        [n, rest @ ..] => then(
            then(
                Witness::gen(GenKind::DistL, [nf_shape(left), mono_shape(&n.factors), nf_shape(rest)]),
                sum_m(nf_times_mono(left, n), mul_right_major(left, rest)),
            ),
            append(
                &product(left, std::slice::from_ref(n), false),
                &product(left, rest, false),
            ),
        ),
    }
}

/// `nf(left) * mono(n) -> nf(left * n)` for non-empty `left`.
fn nf_times_mono(left: &[Mono], n: &Mono) -> Witness {
    match left {
        [] => unreachable!("callers handle the empty sum"),
        [m] => mono_mul(&m.factors, &n.factors),
        [m, rest @ ..] => then(
            Witness::gen(
                GenKind::DistR,
                [mono_shape(&m.factors), nf_shape(rest), mono_shape(&n.factors)],
            ),
            sum_m(mono_mul(&m.factors, &n.factors), nf_times_mono(rest, n)),
        ),
    }
}
