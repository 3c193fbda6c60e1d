//! Structural witnesses for rig categories with a braided tensor.
//!
//! Objects are [`Shape`]s over `+`, `*`, `0` and `I`. Isomorphisms (and the
//! coproduct injections, which are not isomorphisms) between them are
//! [`Witness`] terms, typechecked against their source and target shapes.
//! The [`backend`] compiles witnesses to exact monomial matrices over the
//! fixed bases an [`Env`] assigns; [`coherence`] audits the pentagon,
//! triangle, hexagon, distributivity and naturality laws by comparing both
//! sides exactly; [`strictify`] expands shapes to distributive normal form
//! together with a witness of the expansion.

pub mod backend;
pub mod coherence;
pub mod shape;
pub mod strictify;
mod syntax;
pub mod witness;

pub use backend::{compile, denote, BackendConfig, BackendKind, ConcreteMorphism};
pub use coherence::{audit, audit_all, builtin_laws, AuditReport, LawSpec};
pub use shape::{Atom, Env, Shape};
pub use strictify::{alt_normalize, normalize, NormalForm, StrictifyResult};
pub use syntax::ParseError;
pub use witness::{naturality_square, GenKind, MorType, Witness};
