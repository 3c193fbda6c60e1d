//! Witness terms: typed expressions denoting structural morphisms between
//! shapes, built from associators, braidings, unitors, distributors,
//! absorbers, coproduct injections and copairing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::shape::{parse_shape_top, Shape};
use crate::syntax::{Cursor, ParseError};

/// Generator families, without their shape arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    APlus,
    APlusInv,
    ATimes,
    ATimesInv,
    BPlus,
    BTimesOver,
    BTimesUnder,
    LPlus,
    LPlusInv,
    RPlus,
    RPlusInv,
    LTimes,
    LTimesInv,
    RTimes,
    RTimesInv,
    DistL,
    DistLInv,
    DistR,
    DistRInv,
    ZeroL,
    ZeroLInv,
    ZeroR,
    ZeroRInv,
    Inl,
    Inr,
}

impl GenKind {
    pub const ALL: [GenKind; 25] = [
        GenKind::APlus,
        GenKind::APlusInv,
        GenKind::ATimes,
        GenKind::ATimesInv,
        GenKind::BPlus,
        GenKind::BTimesOver,
        GenKind::BTimesUnder,
        GenKind::LPlus,
        GenKind::LPlusInv,
        GenKind::RPlus,
        GenKind::RPlusInv,
        GenKind::LTimes,
        GenKind::LTimesInv,
        GenKind::RTimes,
        GenKind::RTimesInv,
        GenKind::DistL,
        GenKind::DistLInv,
        GenKind::DistR,
        GenKind::DistRInv,
        GenKind::ZeroL,
        GenKind::ZeroLInv,
        GenKind::ZeroR,
        GenKind::ZeroRInv,
        GenKind::Inl,
        GenKind::Inr,
    ];

    pub fn arity(self) -> usize {
        use GenKind::*;
        match self {
            APlus | APlusInv | ATimes | ATimesInv | DistL | DistLInv | DistR | DistRInv => 3,
            BPlus | BTimesOver | BTimesUnder | Inl | Inr => 2,
            LPlus | LPlusInv | RPlus | RPlusInv | LTimes | LTimesInv | RTimes | RTimesInv | ZeroL | ZeroLInv
            | ZeroR | ZeroRInv => 1,
        }
    }

    /// Name used in the text syntax.
    pub fn name(self) -> &'static str {
        use GenKind::*;
        match self {
            APlus => "aP",
            APlusInv => "aP_inv",
            ATimes => "aT",
            ATimesInv => "aT_inv",
            BPlus => "bP",
            BTimesOver => "bT_over",
            BTimesUnder => "bT_under",
            LPlus => "lP",
            LPlusInv => "lP_inv",
            RPlus => "rP",
            RPlusInv => "rP_inv",
            LTimes => "lT",
            LTimesInv => "lT_inv",
            RTimes => "rT",
            RTimesInv => "rT_inv",
            DistL => "dL",
            DistLInv => "dL_inv",
            DistR => "dR",
            DistRInv => "dR_inv",
            ZeroL => "zL",
            ZeroLInv => "zL_inv",
            ZeroR => "zR",
            ZeroRInv => "zR_inv",
            Inl => "inl",
            Inr => "inr",
        }
    }

    /// Accepts the short text name (`bT_over`) or the long one (`BTimesOver`).
    pub fn from_name(name: &str) -> Option<GenKind> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == name || format!("{k:?}") == name)
    }

    pub fn is_invertible(self) -> bool {
        !matches!(self, GenKind::Inl | GenKind::Inr)
    }

    pub fn is_braiding(self) -> bool {
        matches!(self, GenKind::BPlus | GenKind::BTimesOver | GenKind::BTimesUnder)
    }

    /// Source and target of the generator at the given arguments.
    /// `args.len()` must equal `self.arity()`.
    pub fn typing(self, args: &[Shape]) -> MorType {
        use GenKind::*;
        assert_eq!(args.len(), self.arity(), "arity mismatch for {self:?}");
        let s = |a: &Shape, b: &Shape| Shape::sum(a.clone(), b.clone());
        let p = |a: &Shape, b: &Shape| Shape::prod(a.clone(), b.clone());
        let (src, tgt) = match self {
            APlus => (s(&s(&args[0], &args[1]), &args[2]), s(&args[0], &s(&args[1], &args[2]))),
            ATimes => (p(&p(&args[0], &args[1]), &args[2]), p(&args[0], &p(&args[1], &args[2]))),
            BPlus => (s(&args[0], &args[1]), s(&args[1], &args[0])),
            BTimesOver | BTimesUnder => (p(&args[0], &args[1]), p(&args[1], &args[0])),
            LPlus => (s(&Shape::Zero, &args[0]), args[0].clone()),
            RPlus => (s(&args[0], &Shape::Zero), args[0].clone()),
            LTimes => (p(&Shape::One, &args[0]), args[0].clone()),
            RTimes => (p(&args[0], &Shape::One), args[0].clone()),
            DistL => (
                p(&args[0], &s(&args[1], &args[2])),
                s(&p(&args[0], &args[1]), &p(&args[0], &args[2])),
            ),
            DistR => (
                p(&s(&args[0], &args[1]), &args[2]),
                s(&p(&args[0], &args[2]), &p(&args[1], &args[2])),
            ),
            ZeroL => (p(&Shape::Zero, &args[0]), Shape::Zero),
            ZeroR => (p(&args[0], &Shape::Zero), Shape::Zero),
            Inl => (args[0].clone(), s(&args[0], &args[1])),
            Inr => (args[1].clone(), s(&args[0], &args[1])),
            APlusInv | ATimesInv | LPlusInv | RPlusInv | LTimesInv | RTimesInv | DistLInv | DistRInv | ZeroLInv
            | ZeroRInv => {
                return self
                    .forward()
                    .expect("inverse kinds have a forward form")
                    .typing(args)
                    .reversed();
            }
        };
        MorType::new(src, tgt)
    }

    /// For an `*Inv` kind, the kind it inverts.
    fn forward(self) -> Option<GenKind> {
        use GenKind::*;
        Some(match self {
            APlusInv => APlus,
            ATimesInv => ATimes,
            LPlusInv => LPlus,
            RPlusInv => RPlus,
            LTimesInv => LTimes,
            RTimesInv => RTimes,
            DistLInv => DistL,
            DistRInv => DistR,
            ZeroLInv => ZeroL,
            ZeroRInv => ZeroR,
            _ => return None,
        })
    }

    fn swap_inverse(self) -> Option<GenKind> {
        use GenKind::*;
        if let Some(fwd) = self.forward() {
            return Some(fwd);
        }
        Some(match self {
            APlus => APlusInv,
            ATimes => ATimesInv,
            LPlus => LPlusInv,
            RPlus => RPlusInv,
            LTimes => LTimesInv,
            RTimes => RTimesInv,
            DistL => DistLInv,
            DistR => DistRInv,
            ZeroL => ZeroLInv,
            ZeroR => ZeroRInv,
            _ => return None,
        })
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A generator applied to its shape arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gen {
    kind: GenKind,
    args: Vec<Shape>,
}

impl Gen {
    pub fn new(kind: GenKind, args: Vec<Shape>) -> Result<Gen, ArityError> {
        if args.len() != kind.arity() {
            return Err(ArityError {
                kind,
                expected: kind.arity(),
                found: args.len(),
            });
        }
        Ok(Gen { kind, args })
    }

    pub fn kind(&self) -> GenKind {
        self.kind
    }

    pub fn args(&self) -> &[Shape] {
        &self.args
    }

    pub fn typing(&self) -> MorType {
        self.kind.typing(&self.args)
    }

    /// The generator's syntactic inverse, or `None` for the injections.
    pub fn inverse(&self) -> Option<Gen> {
        use GenKind::*;
        let a = &self.args;
        let (kind, args) = match self.kind {
            Inl | Inr => return None,
            BPlus => (BPlus, vec![a[1].clone(), a[0].clone()]),
            BTimesOver => (BTimesUnder, vec![a[1].clone(), a[0].clone()]),
            BTimesUnder => (BTimesOver, vec![a[1].clone(), a[0].clone()]),
            k => (k.swap_inverse()?, a.clone()),
        };
        Some(Gen { kind, args })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} takes {expected} shape argument(s), got {found}")]
pub struct ArityError {
    pub kind: GenKind,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorType {
    pub source: Shape,
    pub target: Shape,
}

impl MorType {
    pub fn new(source: Shape, target: Shape) -> MorType {
        MorType { source, target }
    }

    pub fn reversed(self) -> MorType {
        MorType::new(self.target, self.source)
    }
}

impl fmt::Display for MorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Id(Shape),
    Gen(Gen),
    /// `Comp(g, f)` is `g` after `f`.
    Comp(Box<Witness>, Box<Witness>),
    SumM(Box<Witness>, Box<Witness>),
    ProdM(Box<Witness>, Box<Witness>),
    Copair(Box<Witness>, Box<Witness>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("cannot compose: first morphism ends at {first_target} but second starts at {second_source}")]
    CompMismatch { first_target: Shape, second_source: Shape },
    #[error("cannot copair: left branch ends at {left_target} but right branch ends at {right_target}")]
    CopairMismatch { left_target: Shape, right_target: Shape },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{constructor} is not an isomorphism and has no inverse")]
pub struct NotInvertible {
    pub constructor: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaturalityError {
    #[error(transparent)]
    Arity(#[from] ArityError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

impl Witness {
    pub fn id(shape: Shape) -> Witness {
        Witness::Id(shape)
    }

    /// Generator constructor for call sites where the arity is known statically.
    ///
    /// Panics if the number of shapes does not match `kind.arity()`.
    pub fn gen<I: IntoIterator<Item = Shape>>(kind: GenKind, args: I) -> Witness {
        match Gen::new(kind, args.into_iter().collect()) {
            Ok(g) => Witness::Gen(g),
            Err(e) => panic!("{e}"),
        }
    }

    /// Diagrammatic composition: `self` first, then `next`.
    pub fn then(self, next: Witness) -> Witness {
        Witness::Comp(Box::new(next), Box::new(self))
    }

    pub fn sum_m(f: Witness, g: Witness) -> Witness {
        Witness::SumM(Box::new(f), Box::new(g))
    }

    pub fn prod_m(f: Witness, g: Witness) -> Witness {
        Witness::ProdM(Box::new(f), Box::new(g))
    }

    pub fn copair(f: Witness, g: Witness) -> Witness {
        Witness::Copair(Box::new(f), Box::new(g))
    }

    /// Composes a non-empty sequence diagrammatically.
    pub fn seq<I: IntoIterator<Item = Witness>>(steps: I) -> Witness {
        let mut it = steps.into_iter();
        let first = it.next().expect("seq needs at least one step");
        it.fold(first, Witness::then)
    }

    pub fn typecheck(&self) -> Result<MorType, TypeError> {
        match self {
            Witness::Id(s) => Ok(MorType::new(s.clone(), s.clone())),
            Witness::Gen(g) => Ok(g.typing()),
            Witness::Comp(g, f) => {
                let tf = f.typecheck()?;
                let tg = g.typecheck()?;
                if tf.target != tg.source {
                    return Err(TypeError::CompMismatch {
                        first_target: tf.target,
                        second_source: tg.source,
                    });
                }
                Ok(MorType::new(tf.source, tg.target))
            }
            Witness::SumM(f, g) => {
                let (tf, tg) = (f.typecheck()?, g.typecheck()?);
                Ok(MorType::new(
                    Shape::sum(tf.source, tg.source),
                    Shape::sum(tf.target, tg.target),
                ))
            }
            Witness::ProdM(f, g) => {
                let (tf, tg) = (f.typecheck()?, g.typecheck()?);
                Ok(MorType::new(
                    Shape::prod(tf.source, tg.source),
                    Shape::prod(tf.target, tg.target),
                ))
            }
            Witness::Copair(f, g) => {
                let (tf, tg) = (f.typecheck()?, g.typecheck()?);
                if tf.target != tg.target {
                    return Err(TypeError::CopairMismatch {
                        left_target: tf.target,
                        right_target: tg.target,
                    });
                }
                Ok(MorType::new(Shape::sum(tf.source, tg.source), tf.target))
            }
        }
    }

    pub fn invert(&self) -> Result<Witness, NotInvertible> {
        Ok(match self {
            Witness::Id(s) => Witness::Id(s.clone()),
            Witness::Gen(g) => Witness::Gen(g.inverse().ok_or(NotInvertible {
                constructor: g.kind().name(),
            })?),
            Witness::Comp(g, f) => Witness::Comp(Box::new(f.invert()?), Box::new(g.invert()?)),
            Witness::SumM(f, g) => Witness::sum_m(f.invert()?, g.invert()?),
            Witness::ProdM(f, g) => Witness::prod_m(f.invert()?, g.invert()?),
            Witness::Copair(..) => return Err(NotInvertible { constructor: "copair" }),
        })
    }

    pub fn is_invertible(&self) -> bool {
        match self {
            Witness::Id(_) => true,
            Witness::Gen(g) => g.kind().is_invertible(),
            Witness::Comp(a, b) | Witness::SumM(a, b) | Witness::ProdM(a, b) => a.is_invertible() && b.is_invertible(),
            Witness::Copair(..) => false,
        }
    }

    /// Applies `map` to every shape argument in the term.
    pub fn substitute(&self, map: &BTreeMap<String, Shape>) -> Witness {
        match self {
            Witness::Id(s) => Witness::Id(s.substitute(map)),
            Witness::Gen(g) => Witness::Gen(Gen {
                kind: g.kind,
                args: g.args.iter().map(|s| s.substitute(map)).collect(),
            }),
            Witness::Comp(a, b) => Witness::Comp(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Witness::SumM(a, b) => Witness::sum_m(a.substitute(map), b.substitute(map)),
            Witness::ProdM(a, b) => Witness::prod_m(a.substitute(map), b.substitute(map)),
            Witness::Copair(a, b) => Witness::copair(a.substitute(map), b.substitute(map)),
        }
    }

    /// Variables mentioned anywhere in the term.
    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Witness::Id(s) => s.free_vars(),
            Witness::Gen(g) => g.args.iter().flat_map(Shape::free_vars).collect(),
            Witness::Comp(a, b) | Witness::SumM(a, b) | Witness::ProdM(a, b) | Witness::Copair(a, b) => {
                let mut vars = a.free_vars();
                vars.extend(b.free_vars());
                vars
            }
        }
    }

    /// Every generator occurrence, left to right.
    pub fn generators(&self) -> Vec<&Gen> {
        let mut out = Vec::new();
        self.collect_gens(&mut out);
        out
    }

    fn collect_gens<'a>(&'a self, out: &mut Vec<&'a Gen>) {
        match self {
            Witness::Id(_) => {}
            Witness::Gen(g) => out.push(g),
            Witness::Comp(g, f) => {
                f.collect_gens(out);
                g.collect_gens(out);
            }
            Witness::SumM(a, b) | Witness::ProdM(a, b) | Witness::Copair(a, b) => {
                a.collect_gens(out);
                b.collect_gens(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Witness::Comp(..) => 0,
            Witness::SumM(..) => 1,
            Witness::ProdM(..) => 2,
            _ => 3,
        }
    }
}

/// The two composites of the naturality square of `kind` at the morphisms
/// `args` (one per shape slot of the generator).
///
/// With `f_i: A_i -> A_i'` the result is `(gen(A) ; T(f), S(f) ; gen(A'))`
/// where `S` and `T` are the generator's source and target read as functors.
/// Both sides have type `S(A) -> T(A')`.
pub fn naturality_square(kind: GenKind, args: &[Witness]) -> Result<(Witness, Witness), NaturalityError> {
    if args.len() != kind.arity() {
        return Err(ArityError {
            kind,
            expected: kind.arity(),
            found: args.len(),
        }
        .into());
    }
    let types = args.iter().map(Witness::typecheck).collect::<Result<Vec<_>, _>>()?;
    let sources: Vec<Shape> = types.iter().map(|t| t.source.clone()).collect();
    let targets: Vec<Shape> = types.iter().map(|t| t.target.clone()).collect();

    let slots: Vec<Shape> = (0..kind.arity()).map(|i| Shape::var(slot_name(i))).collect();
    let schema = kind.typing(&slots);

    let lhs = Witness::gen(kind, sources).then(lift(&schema.target, args));
    let rhs = lift(&schema.source, args).then(Witness::gen(kind, targets));
    Ok((lhs, rhs))
}

fn slot_name(i: usize) -> String {
    format!("__slot{i}")
}

/// Reads a schema shape over slot variables as a functor applied to `args`.
fn lift(schema: &Shape, args: &[Witness]) -> Witness {
    match schema {
        Shape::Var(name) => {
            let idx: usize = name
                .strip_prefix("__slot")
                .and_then(|n| n.parse().ok())
                .expect("schema variables are slots");
            args[idx].clone()
        }
        Shape::Zero | Shape::One => Witness::Id(schema.clone()),
        Shape::Sum(l, r) => Witness::sum_m(lift(l, args), lift(r, args)),
        Shape::Prod(l, r) => Witness::prod_m(lift(l, args), lift(r, args)),
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, w: &Witness, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({w})")
            } else {
                write!(f, "{w}")
            }
        }
        let p = self.precedence();
        match self {
            Witness::Id(s) => write!(f, "id[{s}]"),
            Witness::Gen(g) => {
                write!(f, "{}[", g.kind.name())?;
                for (i, s) in g.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str("]")
            }
            Witness::Copair(a, b) => write!(f, "[{a}, {b}]"),
            Witness::Comp(g, first) => {
                child(f, first, first.precedence() < p)?;
                f.write_str(" ; ")?;
                child(f, g, g.precedence() <= p)
            }
            Witness::SumM(a, b) | Witness::ProdM(a, b) => {
                let op = if p == 1 { " + " } else { " * " };
                child(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                child(f, b, b.precedence() <= p)
            }
        }
    }
}

impl FromStr for Witness {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let w = parse_seq(&mut cur)?;
        cur.finish()?;
        Ok(w)
    }
}

pub fn parse_witness(src: &str) -> Result<Witness, ParseError> {
    src.parse()
}

fn parse_seq(cur: &mut Cursor<'_>) -> Result<Witness, ParseError> {
    let mut w = parse_sum(cur)?;
    while cur.eat(';') {
        w = w.then(parse_sum(cur)?);
    }
    Ok(w)
}

fn parse_sum(cur: &mut Cursor<'_>) -> Result<Witness, ParseError> {
    let mut w = parse_prod(cur)?;
    while cur.eat('+') {
        w = Witness::sum_m(w, parse_prod(cur)?);
    }
    Ok(w)
}

fn parse_prod(cur: &mut Cursor<'_>) -> Result<Witness, ParseError> {
    let mut w = parse_atom(cur)?;
    while cur.eat('*') {
        w = Witness::prod_m(w, parse_atom(cur)?);
    }
    Ok(w)
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<Witness, ParseError> {
    if cur.eat('(') {
        let w = parse_seq(cur)?;
        cur.expect(')')?;
        return Ok(w);
    }
    if cur.eat('[') {
        let a = parse_seq(cur)?;
        cur.expect(',')?;
        let b = parse_seq(cur)?;
        cur.expect(']')?;
        return Ok(Witness::copair(a, b));
    }
    let Some(name) = cur.ident() else {
        return Err(cur.error("expected a witness term"));
    };
    let kind = match name {
        "id" | "Id" => None,
        _ => Some(GenKind::from_name(name).ok_or_else(|| cur.error(format!("unknown generator '{name}'")))?),
    };
    cur.expect('[')?;
    let mut args = vec![parse_shape_top(cur)?];
    while cur.eat(',') {
        args.push(parse_shape_top(cur)?);
    }
    cur.expect(']')?;
    match kind {
        None if args.len() == 1 => Ok(Witness::Id(args.remove(0))),
        None => Err(cur.error(format!("id takes 1 shape argument, got {}", args.len()))),
        Some(kind) => Gen::new(kind, args)
            .map(Witness::Gen)
            .map_err(|e| cur.error(e.to_string())),
    }
}
