//! Numerical certification of harmonic convexity and Hermite-Hadamard type
//! inequalities for functions of two variables on rectangles in the positive
//! quadrant.
//!
//! The crate is organised bottom-up:
//!
//! - [`expr`]: parser, evaluator and symbolic differentiator for `f(x, y)`.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature in one and two dimensions,
//!   including harmonic-weight means `ab/(b-a) * int f(x)/x^2 dx`.
//! - [`special`]: log-gamma, Beta, Gauss hypergeometric `2F1` and the Hölder
//!   moment coefficients used by the bound evaluator.
//! - [`convexity`]: lattice certification and refutation of the classical and
//!   harmonic convexity predicates, with counterexample witnesses.
//! - [`hh`]: the Hermite-Hadamard chains, the integration-by-parts identity
//!   and the Hölder bound, as margin-annotated reports.

pub mod convexity;
mod error;
pub mod expr;
pub mod hh;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use expr::{DomainError, Expr, ParseError, Var};
pub use quad::{QuadResult, Rect, Tolerance};
