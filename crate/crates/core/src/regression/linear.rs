//! Affine boundary fitters: smoothed quantile regression and
//! distortion-weighted least squares.

use nalgebra::{DMatrix, DVector};

use super::loss::{smoothed_pinball, smoothed_pinball_grad, DEFAULT_SMOOTHING};
use super::{Dataset, LinearBoundary, QuantileLevel};
use crate::distortion::{rank_weights, MinMaxVar, Side};
use crate::error::{Error, Result};
use crate::num::optim::lbfgs;

const MAX_ITER: usize = 5000;

/// Fits the affine `tau`-quantile boundary by quasi-Newton descent on the
/// smoothed pinball objective, starting from the least-squares solution.
///
/// After the smoothed solve (width [`DEFAULT_SMOOTHING`], one warm-started
/// refinement at 1e-6), the result is polished onto the exact-loss vertex:
/// the interpolant through the `d + 1` smallest residuals replaces the
/// smoothed solution whenever it does not increase the exact pinball loss.
/// On exactly affine data this recovers the interpolant to machine
/// precision; in general it removes the `O(alpha)` smoothing bias.
pub fn fit_quantile_linear(d: &Dataset, tau: QuantileLevel) -> Result<LinearBoundary> {
    require_linear_rows(d)?;
    let n = d.len();
    let p = d.dim() + 1;
    let t = tau.value();

    // standardize for optimizer conditioning; map coefficients back at the end
    let std = Standardizer::fit(d);
    let z = std.transform_inputs(d.inputs());
    let y: Vec<f64> = d
        .targets()
        .iter()
        .map(|v| (v - std.target_mean) / std.target_scale)
        .collect();

    // least-squares start
    let design = with_intercept(&z);
    let mut beta = ols(&design, &y)?;

    for (stage, &alpha) in [DEFAULT_SMOOTHING, 1e-6].iter().enumerate() {
        let objective = |b: &[f64], grad: &mut [f64]| -> f64 {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let mut value = 0.0;
            for i in 0..n {
                let mut pred = b[0];
                for j in 0..p - 1 {
                    pred += b[j + 1] * z[(i, j)];
                }
                let u = y[i] - pred;
                value += smoothed_pinball(u, tau, alpha);
                let s = -smoothed_pinball_grad(u, tau, alpha);
                grad[0] += s;
                for j in 0..p - 1 {
                    grad[j + 1] += s * z[(i, j)];
                }
            }
            value
        };
        // first-order tolerance 1e-8 per observation on the driving stage
        let tol = 1e-8 * n as f64;
        let cap = if stage == 0 { MAX_ITER } else { MAX_ITER / 5 };
        let out = lbfgs(objective, &beta, tol, cap);
        if stage == 0 && !out.converged {
            return Err(Error::OptimNonConvergence {
                iterations: out.iterations,
                grad_norm: out.grad_norm,
            });
        }
        beta = out.x;
    }

    // vertex polish: the exact minimizer interpolates d+1 sample points
    let exact_loss = |b: &[f64]| -> f64 {
        let mut loss = 0.0;
        for i in 0..n {
            let mut pred = b[0];
            for j in 0..p - 1 {
                pred += b[j + 1] * z[(i, j)];
            }
            let r = pred - y[i];
            loss += if r >= 0.0 { (1.0 - t) * r } else { -t * r };
        }
        loss
    };
    let mut order: Vec<usize> = (0..n).collect();
    let residual = |b: &[f64], i: usize| -> f64 {
        let mut pred = b[0];
        for j in 0..p - 1 {
            pred += b[j + 1] * z[(i, j)];
        }
        y[i] - pred
    };
    order.sort_by(|&a, &b2| residual(&beta, a).abs().total_cmp(&residual(&beta, b2).abs()));
    if n >= p {
        let active: Vec<usize> = order[..p].to_vec();
        let a = DMatrix::from_fn(p, p, |r, c| if c == 0 { 1.0 } else { z[(active[r], c - 1)] });
        let rhs = DVector::from_fn(p, |r, _| y[active[r]]);
        if let Some(sol) = a.lu().solve(&rhs) {
            let candidate: Vec<f64> = sol.iter().copied().collect();
            if candidate.iter().all(|v| v.is_finite())
                && exact_loss(&candidate) <= exact_loss(&beta) + 1e-12
            {
                beta = candidate;
            }
        }
    }

    Ok(std.destandardize(&beta))
}

/// Fits an affine boundary by distortion-weighted least squares: squared
/// residuals are weighted by the rank-based distortion increments and the
/// weights recomputed from the residual ranks until the coefficients settle
/// (fixed-point iteration, update damping 0.5, tolerance 1e-10).
///
/// When the solution sits on a rank boundary the weight targets oscillate;
/// the update step then decays until the iteration pins the boundary point.
pub fn fit_distorted_ls(d: &Dataset, dist: &MinMaxVar, side: Side) -> Result<LinearBoundary> {
    require_linear_rows(d)?;
    let n = d.len();
    let p = d.dim() + 1;
    let design = with_intercept(d.inputs());
    let y: Vec<f64> = d.targets().iter().copied().collect();

    let increments = rank_weights(n, dist, side)?;
    let mut weights = vec![1.0 / n as f64; n];
    let mut beta = wls(&design, &y, &weights)?;
    let mut eta = 0.5;
    let mut prev_delta = f64::INFINITY;

    for _ in 0..2000 {
        // rank residuals ascending; ties keep input order (stable sort)
        let residuals: Vec<f64> = (0..n)
            .map(|i| {
                let mut pred = 0.0;
                for j in 0..p {
                    pred += beta[j] * design[(i, j)];
                }
                y[i] - pred
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| residuals[a].total_cmp(&residuals[b]));
        let mut fresh = vec![0.0; n];
        for (rank, &idx) in order.iter().enumerate() {
            fresh[idx] = increments[rank];
        }
        for i in 0..n {
            weights[i] = (1.0 - eta) * weights[i] + eta * fresh[i];
        }

        let next = wls(&design, &y, &weights)?;
        let delta = next
            .iter()
            .zip(&beta)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        beta = next;
        if delta < 1e-10 {
            return Ok(LinearBoundary {
                intercept: beta[0],
                coefficients: DVector::from_iterator(p - 1, beta[1..].iter().copied()),
            });
        }
        if delta >= 0.9999 * prev_delta {
            eta = (0.5 * eta).max(1e-14);
        }
        prev_delta = delta;
    }
    Err(Error::OptimNonConvergence {
        iterations: 2000,
        grad_norm: f64::NAN,
    })
}

fn require_linear_rows(d: &Dataset) -> Result<()> {
    if d.len() < d.dim() + 1 {
        return Err(Error::InvalidParameter(format!(
            "affine fit needs at least d + 1 = {} rows, got {}",
            d.dim() + 1,
            d.len()
        )));
    }
    Ok(())
}

fn with_intercept(inputs: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, d) = (inputs.nrows(), inputs.ncols());
    DMatrix::from_fn(n, d + 1, |i, j| if j == 0 { 1.0 } else { inputs[(i, j - 1)] })
}

fn ols(design: &DMatrix<f64>, y: &[f64]) -> Result<Vec<f64>> {
    let n = design.nrows();
    wls(design, y, &vec![1.0 / n as f64; n])
}

fn wls(design: &DMatrix<f64>, y: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    let p = design.ncols();
    let mut normal = DMatrix::zeros(p, p);
    let mut rhs = DVector::zeros(p);
    for i in 0..design.nrows() {
        let w = weights[i];
        if w == 0.0 {
            continue;
        }
        for a in 0..p {
            rhs[a] += w * design[(i, a)] * y[i];
            for b in a..p {
                normal[(a, b)] += w * design[(i, a)] * design[(i, b)];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            normal[(a, b)] = normal[(b, a)];
        }
    }
    normal
        .cholesky()
        .map(|ch| ch.solve(&rhs).iter().copied().collect())
        .ok_or_else(|| Error::LinearAlgebra("singular weighted normal equations".into()))
}

/// Affine standardization of inputs and target, with the inverse map for
/// fitted coefficients.
struct Standardizer {
    input_means: Vec<f64>,
    input_scales: Vec<f64>,
    target_mean: f64,
    target_scale: f64,
}

impl Standardizer {
    fn fit(d: &Dataset) -> Self {
        let n = d.len() as f64;
        let dim = d.dim();
        let mut input_means = vec![0.0; dim];
        let mut input_scales = vec![0.0; dim];
        for j in 0..dim {
            let col = d.inputs().column(j);
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            input_means[j] = mean;
            input_scales[j] = if var.sqrt() > 0.0 { var.sqrt() } else { 1.0 };
        }
        let target_mean = d.targets().iter().sum::<f64>() / n;
        let tvar = d
            .targets()
            .iter()
            .map(|v| (v - target_mean).powi(2))
            .sum::<f64>()
            / n;
        Self {
            input_means,
            input_scales,
            target_mean,
            target_scale: if tvar.sqrt() > 0.0 { tvar.sqrt() } else { 1.0 },
        }
    }

    fn transform_inputs(&self, inputs: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(inputs.nrows(), inputs.ncols(), |i, j| {
            (inputs[(i, j)] - self.input_means[j]) / self.input_scales[j]
        })
    }

    fn destandardize(&self, beta: &[f64]) -> LinearBoundary {
        let d = beta.len() - 1;
        let mut coefficients = DVector::zeros(d);
        let mut intercept = self.target_mean + self.target_scale * beta[0];
        for j in 0..d {
            let c = self.target_scale * beta[j + 1] / self.input_scales[j];
            coefficients[j] = c;
            intercept -= c * self.input_means[j];
        }
        LinearBoundary {
            intercept,
            coefficients,
        }
    }
}
