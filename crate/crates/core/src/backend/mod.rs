//! Concrete semantics. A shape under an environment denotes an enumerated
//! basis; a witness term compiles to a (partial) monomial matrix over those
//! bases with phases kept as exponents of a primitive root of unity.
//!
//! Sums enumerate the left block then the right block. Products enumerate
//! pairs lexicographically with the left factor major, which is the usual
//! Kronecker layout.

mod compile;
pub mod disjoint;
mod morphism;

use std::fmt;

use thiserror::Error;

use crate::shape::{Env, Shape, UnboundVariable};
use crate::witness::TypeError;

pub use compile::compile;
pub use morphism::{ConcreteMorphism, Entry, MorphismError, MorphismJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    /// Finite sets with disjoint union and cartesian product. All phases trivial.
    FinSet,
    /// Graded vector spaces whose tensor braiding picks up `q^(deg u * deg v)`.
    GradedVec,
}

/// Deliberate semantic faults, used to check that the audits are not vacuous.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fault {
    /// Enumerate the right summand before the left one.
    SumTagFlip,
    /// Compile the under-braiding without its phase.
    DropUnderPhase,
    /// Emit the two blocks of the left distributor in swapped order.
    DistLBlockSwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BackendConfig {
    kind: BackendKind,
    phase_order: u32,
    fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("phase order must be at least 1")]
pub struct BadPhaseOrder;

impl BackendConfig {
    pub fn finset() -> BackendConfig {
        BackendConfig {
            kind: BackendKind::FinSet,
            phase_order: 1,
            fault: None,
        }
    }

    pub fn graded(phase_order: u32) -> Result<BackendConfig, BadPhaseOrder> {
        if phase_order == 0 {
            return Err(BadPhaseOrder);
        }
        Ok(BackendConfig {
            kind: BackendKind::GradedVec,
            phase_order,
            fault: None,
        })
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn phase_order(&self) -> u32 {
        self.phase_order
    }

    #[doc(hidden)]
    pub fn with_fault(mut self, fault: Fault) -> BackendConfig {
        self.fault = Some(fault);
        self
    }

    pub(crate) fn fault(&self) -> Option<Fault> {
        self.fault
    }

    fn degree(&self, degree: i64) -> i64 {
        match self.kind {
            BackendKind::FinSet => 0,
            BackendKind::GradedVec => degree,
        }
    }

    pub(crate) fn flips_sums(&self) -> bool {
        self.fault == Some(Fault::SumTagFlip)
    }
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Unbound(#[from] UnboundVariable),
}

/// Position of a basis vector inside the shape tree: which summand it came
/// from at every `+`, which pair components at every `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Path {
    Atom(String),
    Unit,
    Left(Box<Path>),
    Right(Box<Path>),
    Pair(Box<Path>, Box<Path>),
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Atom(label) => f.write_str(label),
            Path::Unit => f.write_str("()"),
            Path::Left(p) => write!(f, "L({p})"),
            Path::Right(p) => write!(f, "R({p})"),
            Path::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisVector {
    pub path: Path,
    pub degree: i64,
}

/// The fixed basis of `shape` under `env`, in layout order.
pub fn denote(shape: &Shape, env: &Env, cfg: &BackendConfig) -> Result<Vec<BasisVector>, UnboundVariable> {
    Ok(match shape {
        Shape::Var(name) => env
            .atoms(name)?
            .iter()
            .map(|a| BasisVector {
                path: Path::Atom(a.label.clone()),
                degree: cfg.degree(a.degree),
            })
            .collect(),
        Shape::Zero => Vec::new(),
        Shape::One => vec![BasisVector {
            path: Path::Unit,
            degree: 0,
        }],
        Shape::Sum(l, r) => {
            let tag = |wrap: fn(Box<Path>) -> Path| {
                move |b: BasisVector| BasisVector {
                    path: wrap(Box::new(b.path)),
                    degree: b.degree,
                }
            };
            let left = denote(l, env, cfg)?.into_iter().map(tag(Path::Left));
            let right = denote(r, env, cfg)?.into_iter().map(tag(Path::Right));
            if cfg.flips_sums() {
                right.chain(left).collect()
            } else {
                left.chain(right).collect()
            }
        }
        Shape::Prod(l, r) => {
            let left = denote(l, env, cfg)?;
            let right = denote(r, env, cfg)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for u in &left {
                for v in &right {
                    out.push(BasisVector {
                        path: Path::Pair(Box::new(u.path.clone()), Box::new(v.path.clone())),
                        degree: u.degree + v.degree,
                    });
                }
            }
            out
        }
    })
}

/// Degrees of the basis of `shape`, in layout order, without building paths.
pub(crate) fn degrees(shape: &Shape, env: &Env, cfg: &BackendConfig) -> Result<Vec<i64>, UnboundVariable> {
    Ok(match shape {
        Shape::Var(name) => env.atoms(name)?.iter().map(|a| cfg.degree(a.degree)).collect(),
        Shape::Zero => Vec::new(),
        Shape::One => vec![0],
        Shape::Sum(l, r) => {
            let (mut first, second) = (degrees(l, env, cfg)?, degrees(r, env, cfg)?);
            if cfg.flips_sums() {
                let mut second = second;
                second.extend(first);
                second
            } else {
                first.extend(second);
                first
            }
        }
        Shape::Prod(l, r) => {
            let (left, right) = (degrees(l, env, cfg)?, degrees(r, env, cfg)?);
            left.iter().flat_map(|u| right.iter().map(move |v| u + v)).collect()
        }
    })
}
