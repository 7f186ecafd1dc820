use crate::bounds::BoundError;
use crate::expr::{EvalError, ModelError, ParseError};
use crate::means::MeansError;
use crate::mediant::MediantError;
use crate::norms::NormError;
use crate::quad::QuadError;

/// Union of the per-module error types, for operations that cross module
/// boundaries (bound reports touch parsing, norms, and quadrature at once).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Mediant(#[from] MediantError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Means(#[from] MeansError),
}
