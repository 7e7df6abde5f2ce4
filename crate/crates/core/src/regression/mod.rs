//! Boundary learners mapping risk vectors to compensations: quantile linear
//! regression, distortion-weighted least squares, and Gaussian-process
//! regression whose representer coefficients can be re-optimized against a
//! quantile or distorted objective.

mod gpr;
mod linear;
mod loss;

pub use gpr::{
    adjust_gpr_coefficients, fit_gpr, fit_gpr_with, AdjustObjective, GprBoundary, GprOptions,
    KernelSpec, NoiseSpec,
};
pub use linear::{fit_distorted_ls, fit_quantile_linear};
pub use loss::{pinball_loss, smoothed_pinball, smoothed_pinball_grad, DEFAULT_SMOOTHING};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Quantile level in the open unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileLevel(f64);

impl QuantileLevel {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile level must lie strictly in (0,1), got {tau}"
            )));
        }
        Ok(Self(tau))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// A regression problem: `n x d` risk inputs with an `n`-vector of targets.
#[derive(Debug, Clone)]
pub struct Dataset {
    inputs: DMatrix<f64>,
    targets: DVector<f64>,
}

impl Dataset {
    /// Builds a dataset after checking shape agreement and finiteness. The
    /// linear fitters additionally require `n >= d + 1` rows; the GPR fitter
    /// accepts any nonempty dataset.
    pub fn new(inputs: DMatrix<f64>, targets: DVector<f64>) -> Result<Self> {
        if inputs.nrows() == 0 || inputs.ncols() == 0 {
            return Err(Error::InvalidParameter("dataset must be nonempty".into()));
        }
        if inputs.nrows() != targets.len() {
            return Err(Error::InvalidParameter(format!(
                "{} input rows but {} targets",
                inputs.nrows(),
                targets.len()
            )));
        }
        if inputs.iter().any(|v| !v.is_finite()) || targets.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "dataset entries must all be finite".into(),
            ));
        }
        Ok(Self { inputs, targets })
    }

    pub fn from_rows(rows: &[Vec<f64>], targets: &[f64]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter("dataset must be nonempty".into()));
        }
        let d = rows[0].len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidParameter("ragged input rows".into()));
        }
        let inputs = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
        Ok(Self::new(inputs, DVector::from_column_slice(targets))?)
    }

    pub fn len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.inputs.ncols()
    }

    pub fn inputs(&self) -> &DMatrix<f64> {
        &self.inputs
    }

    pub fn targets(&self) -> &DVector<f64> {
        &self.targets
    }
}

/// Affine boundary `x -> intercept + coefficients . x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearBoundary {
    pub intercept: f64,
    pub coefficients: DVector<f64>,
}

impl LinearBoundary {
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.intercept
            + self
                .coefficients
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    /// The gradient of an affine map is its coefficient vector everywhere.
    pub fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        self.coefficients.iter().copied().collect()
    }
}
