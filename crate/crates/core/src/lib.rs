//! Finite universal algebra toolkit.
//!
//! The crate decides linear Maltsev conditions (near-unanimity, half near-unanimity,
//! skew-edge, Pixley, ...) over varieties generated by finitely many finite algebras,
//! computes Jónsson and Day levels by searching free algebras, and evaluates
//! congruence identities built from meets and relational products.
//!
//! Everything is organized around a few kernels:
//!
//! * [`algebra::closure`] generates subpowers with witness terms, using bit-sliced
//!   evaluation when every factor has two elements;
//! * [`algebra::equations`] checks equations by exhaustive enumeration;
//! * [`relations`] handles partitions, congruences and relation expressions;
//! * [`maltsev`] builds free algebras, solves linear term conditions and measures
//!   distributivity/modularity levels;
//! * [`constructions`] provides the concrete algebras, term chains and equation
//!   suites around half near-unanimity terms.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and falls back to plain iteration otherwise.

pub mod algebra;
pub mod constructions;
mod error;
pub mod maltsev;
pub mod par;
pub mod relations;

pub use algebra::term::{Assignment, Term};
pub use algebra::{Algebra, Elem, FiniteAlgebra, OpSymbol};
pub use error::{Error, Result};
pub use par::Exec;
