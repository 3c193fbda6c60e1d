//! Object expressions over the rig signature `(+, *, 0, I)` and the
//! environments that bind their variables to concrete graded bases.
//!
//! Shapes are purely syntactic. `0 + A` and `A` are different shapes; getting
//! from one to the other takes a witness term.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{is_identifier, Cursor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Var(String),
    Zero,
    One,
    Sum(Box<Shape>, Box<Shape>),
    Prod(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn var(name: impl Into<String>) -> Shape {
        Shape::Var(name.into())
    }

    pub fn sum(left: Shape, right: Shape) -> Shape {
        Shape::Sum(Box::new(left), Box::new(right))
    }

    pub fn prod(left: Shape, right: Shape) -> Shape {
        Shape::Prod(Box::new(left), Box::new(right))
    }

    /// Names of all variables occurring in the shape.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Shape::Var(name) => {
                out.insert(name.clone());
            }
            Shape::Zero | Shape::One => {}
            Shape::Sum(l, r) | Shape::Prod(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Number of tree nodes (leaves and binary operators).
    pub fn node_count(&self) -> usize {
        match self {
            Shape::Var(_) | Shape::Zero | Shape::One => 1,
            Shape::Sum(l, r) | Shape::Prod(l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Size of the fixed basis this shape denotes under `env`.
    pub fn cardinality(&self, env: &Env) -> Result<usize, UnboundVariable> {
        Ok(match self {
            Shape::Var(name) => env.atoms(name)?.len(),
            Shape::Zero => 0,
            Shape::One => 1,
            Shape::Sum(l, r) => l.cardinality(env)? + r.cardinality(env)?,
            Shape::Prod(l, r) => l.cardinality(env)? * r.cardinality(env)?,
        })
    }

    /// Replaces variables according to `map`; unmapped variables are kept.
    pub fn substitute(&self, map: &BTreeMap<String, Shape>) -> Shape {
        match self {
            Shape::Var(name) => map.get(name).cloned().unwrap_or_else(|| self.clone()),
            Shape::Zero | Shape::One => self.clone(),
            Shape::Sum(l, r) => Shape::sum(l.substitute(map), r.substitute(map)),
            Shape::Prod(l, r) => Shape::prod(l.substitute(map), r.substitute(map)),
        }
    }

    fn fmt_nested(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match self {
            Shape::Var(name) => f.write_str(name),
            Shape::Zero => f.write_str("0"),
            Shape::One => f.write_str("I"),
            Shape::Sum(l, r) | Shape::Prod(l, r) => {
                let op = if matches!(self, Shape::Sum(..)) { '+' } else { '*' };
                if !top {
                    f.write_str("(")?;
                }
                l.fmt_nested(f, false)?;
                write!(f, "{op}")?;
                r.fmt_nested(f, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Structural equality, the only equality shapes have.
pub fn shape_eq(s: &Shape, t: &Shape) -> bool {
    s == t
}

/// Renders with the outermost parentheses dropped: `(A*B)*C`.
impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_nested(f, true)
    }
}

impl FromStr for Shape {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let shape = parse_shape_top(&mut cur)?;
        cur.finish()?;
        Ok(shape)
    }
}

pub fn parse_shape(src: &str) -> Result<Shape, ParseError> {
    src.parse()
}

/// `shape (('+' | '*') shape)?`: one binary operator may appear unparenthesized
/// at the top level; anything deeper must be bracketed.
pub(crate) fn parse_shape_top(cur: &mut Cursor<'_>) -> Result<Shape, ParseError> {
    let left = parse_shape_atom(cur)?;
    if cur.eat('+') {
        Ok(Shape::sum(left, parse_shape_atom(cur)?))
    } else if cur.eat('*') {
        Ok(Shape::prod(left, parse_shape_atom(cur)?))
    } else {
        Ok(left)
    }
}

fn parse_shape_atom(cur: &mut Cursor<'_>) -> Result<Shape, ParseError> {
    if cur.eat('0') {
        return Ok(Shape::Zero);
    }
    if cur.eat('(') {
        let left = parse_shape_atom(cur)?;
        let shape = if cur.eat('+') {
            Shape::sum(left, parse_shape_atom(cur)?)
        } else if cur.eat('*') {
            Shape::prod(left, parse_shape_atom(cur)?)
        } else {
            return Err(cur.error("expected '+' or '*' inside parentheses"));
        };
        cur.expect(')')?;
        return Ok(shape);
    }
    match cur.ident() {
        Some("I") => Ok(Shape::One),
        Some(name) => Ok(Shape::var(name)),
        None => Err(cur.error("expected a shape")),
    }
}

/// A basis element: a label unique within its object, and a degree that
/// drives the braiding phase in the graded backend.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub label: String,
    #[serde(default)]
    pub degree: i64,
}

impl Atom {
    pub fn new(label: impl Into<String>, degree: i64) -> Atom {
        Atom {
            label: label.into(),
            degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unbound variable '{0}'")]
pub struct UnboundVariable(pub String);

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("variable '{var}' binds label '{label}' more than once")]
    DuplicateLabel { var: String, label: String },
    #[error("'{0}' is not a valid variable name")]
    BadName(String),
    #[error("malformed environment JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Binds shape variables to ordered lists of atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    bindings: BTreeMap<String, Vec<Atom>>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, atoms: Vec<Atom>) -> Result<(), EnvError> {
        let var = var.into();
        let mut seen = BTreeSet::new();
        for atom in &atoms {
            if !seen.insert(atom.label.as_str()) {
                return Err(EnvError::DuplicateLabel {
                    var,
                    label: atom.label.clone(),
                });
            }
        }
        self.bindings.insert(var, atoms);
        Ok(())
    }

    /// Builder form of [`Env::bind`] for atoms given as `(label, degree)`.
    pub fn with(mut self, var: &str, atoms: &[(&str, i64)]) -> Result<Env, EnvError> {
        let atoms = atoms.iter().map(|&(l, d)| Atom::new(l, d)).collect();
        self.bind(var, atoms)?;
        Ok(self)
    }

    pub fn atoms(&self, var: &str) -> Result<&[Atom], UnboundVariable> {
        self.bindings
            .get(var)
            .map(Vec::as_slice)
            .ok_or_else(|| UnboundVariable(var.to_string()))
    }

    pub fn is_bound(&self, var: &str) -> bool {
        self.bindings.contains_key(var)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    /// First variable of `shape` this environment leaves unbound, if any.
    pub fn check_covers(&self, shape: &Shape) -> Result<(), UnboundVariable> {
        match shape.free_vars().into_iter().find(|v| !self.is_bound(v)) {
            Some(v) => Err(UnboundVariable(v)),
            None => Ok(()),
        }
    }

    pub fn from_json(src: &str) -> Result<Env, EnvError> {
        let raw: BTreeMap<String, Vec<Atom>> = serde_json::from_str(src)?;
        let mut env = Env::new();
        for (var, atoms) in raw {
            if !is_identifier(&var) || var == "I" {
                return Err(EnvError::BadName(var));
            }
            env.bind(var, atoms)?;
        }
        Ok(env)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.bindings).expect("atoms serialize infallibly")
    }
}
