use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested quantity is outside the domain where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quantity diverges for the given parameters.
    #[error("divergent quantity: {0}")]
    Divergent(String),

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed to converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    /// An iterative optimizer hit its iteration cap before converging.
    #[error("optimizer did not converge after {iterations} iterations (gradient norm {grad_norm:e})")]
    OptimNonConvergence { iterations: usize, grad_norm: f64 },

    /// A matrix factorization failed (typically a non-positive-definite kernel).
    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    /// A Monte Carlo estimate is unusable (for example a non-positive mean under a logarithm).
    #[error("Monte Carlo estimate invalid: {0}")]
    MonteCarlo(String),
}

pub type Result<T> = std::result::Result<T, Error>;
