//! Certified error bounds for the deviation of a point value from an
//! integral mean.
//!
//! Given a function `f` on `[a, b]` with a bounded derivative and an
//! interior evaluation point `p`, this crate computes upper bounds for
//!
//! ```text
//! | f(p) - 1/(b-a) * integral of f over [a, b] |
//! ```
//!
//! and verifies each bound against a high-accuracy quadrature oracle.
//! Four bound families are provided:
//!
//! * the classical Ostrowski bound
//!   `[1/4 + ((p - (a+b)/2)/(b-a))^2] * (b-a) * sup|f'|`,
//! * a min-based refinement that takes the smaller of the classical bound
//!   and `1/2 * max{(p-a) * sup|f'| on [a,p], (b-p) * sup|f'| on [p,b]}`,
//! * a piecewise variant for functions with finitely many declared kinks
//!   (breakpoints), evaluated at a point between kinks, and
//! * an at-breakpoint variant for evaluation exactly at a kink.
//!
//! Functions are described by a small expression language (see [`expr`])
//! with forward-mode automatic differentiation, so derivative sup-norms
//! can be estimated by sampling ([`norms`]) or supplied exactly by the
//! caller. The quadrature oracle ([`quad`]) is an adaptive Simpson rule
//! that splits at declared breakpoints. The [`means`] module applies the
//! same machinery to the classical arithmetic, geometric, harmonic, and
//! logarithmic means, checking a family of refined inequalities between
//! them.
//!
//! Reports never clamp: when a computed bound comes out below the observed
//! deviation (which can genuinely happen for the piecewise forms, whose
//! additive term may be negative), the report says so via
//! [`BoundStatus::ViolatedObserved`] rather than papering over it.
//!
//! All types are plain data and all operations are pure; everything here
//! is safe to call concurrently.
//!
//! # Example
//!
//! ```
//! use ostrowski::{BoundMode, BoundRequest, FunctionModel};
//!
//! let ast = "x^2".parse().unwrap();
//! let model = FunctionModel::new(ast, 0.0, 1.0).unwrap();
//! let req = BoundRequest::new(&model, 0.25, BoundMode::Refined);
//! let report = ostrowski::bounds::bound_report(&req).unwrap();
//!
//! assert!((report.total_bound - 0.625).abs() < 1e-12);
//! assert!(report.deviation <= report.total_bound);
//! ```

pub mod bounds;
pub mod corpus;
mod error;
pub mod expr;
pub mod means;
pub mod mediant;
pub mod norms;
pub mod quad;

pub use bounds::{BoundMode, BoundReport, BoundRequest, BoundStatus, SweepEntry};
pub use error::Error;
pub use expr::{DualValue, EvalError, ExprAst, FunctionModel, ModelError, ParseError};
pub use means::{InequalityCheck, MeansReport, MeansValues, ReciprocalBound};
pub use mediant::RatioList;
pub use norms::{NormConfig, NormMethod, SubintervalNorm};
pub use quad::IntegralResult;
