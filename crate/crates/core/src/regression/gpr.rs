//! Gaussian-process boundary regression with a squared-exponential kernel,
//! an explicit affine mean, and representer-coefficient re-optimization
//! against quantile or distorted objectives.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::loss::{smoothed_pinball, smoothed_pinball_grad, DEFAULT_SMOOTHING};
use super::{Dataset, QuantileLevel};
use crate::distortion::{rank_weights, MinMaxVar, Side};
use crate::error::{Error, Result};
use crate::num::optim::{lbfgs, nelder_mead};

/// Kernel hyperparameter handling for [`fit_gpr_with`].
#[derive(Debug, Clone)]
pub enum KernelSpec {
    /// Maximize the Gaussian marginal likelihood over lengthscales and
    /// amplitude with multi-start Nelder-Mead.
    Estimate,
    /// Use the given per-dimension lengthscales (standardized-input space)
    /// and amplitude as-is.
    Fixed { lengthscales: Vec<f64>, amplitude: f64 },
}

/// Noise-variance handling for [`fit_gpr_with`].
#[derive(Debug, Clone, Copy)]
pub enum NoiseSpec {
    Estimate,
    Fixed(f64),
}

/// Options for the GPR fit.
#[derive(Debug, Clone)]
pub struct GprOptions {
    pub kernel: KernelSpec,
    pub noise: NoiseSpec,
    /// Number of random multi-start restarts for the likelihood search.
    pub restarts: usize,
    /// Seed for the restart initializations; the search is deterministic
    /// given this value.
    pub seed: u64,
}

impl Default for GprOptions {
    fn default() -> Self {
        Self {
            kernel: KernelSpec::Estimate,
            noise: NoiseSpec::Estimate,
            restarts: 8,
            seed: 0,
        }
    }
}

/// Fitted Gaussian-process boundary.
///
/// Inputs are standardized to zero mean and unit variance internally;
/// `training_inputs` and `kernel_lengthscales` live in that standardized
/// space while `intercept` and `linear_part` are already mapped back to raw
/// input coordinates. Predictions are
/// `intercept + linear_part . x + sum_i weights_i k(z_i, z(x))`.
#[derive(Debug, Clone)]
pub struct GprBoundary {
    pub kernel_lengthscales: DVector<f64>,
    pub kernel_amplitude: f64,
    pub noise_variance: f64,
    pub training_inputs: DMatrix<f64>,
    pub weights: DVector<f64>,
    pub intercept: f64,
    pub linear_part: DVector<f64>,
    input_means: DVector<f64>,
    input_scales: DVector<f64>,
}

impl GprBoundary {
    pub fn input_means(&self) -> &DVector<f64> {
        &self.input_means
    }

    pub fn input_scales(&self) -> &DVector<f64> {
        &self.input_scales
    }

    /// Maps a raw query point into the standardized training space.
    pub fn standardize(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_fn(self.input_means.len(), |j, _| {
            (x[j] - self.input_means[j]) / self.input_scales[j]
        })
    }

    fn kernel(&self, i: usize, z: &DVector<f64>) -> f64 {
        let mut q = 0.0;
        for j in 0..z.len() {
            let diff = (self.training_inputs[(i, j)] - z[j]) / self.kernel_lengthscales[j];
            q += diff * diff;
        }
        self.kernel_amplitude * (-0.5 * q).exp()
    }

    /// Training-kernel Gram matrix (no noise term).
    pub fn kernel_matrix(&self) -> DMatrix<f64> {
        let n = self.training_inputs.nrows();
        let d = self.training_inputs.ncols();
        DMatrix::from_fn(n, n, |i, j| {
            let mut q = 0.0;
            for k in 0..d {
                let diff = (self.training_inputs[(i, k)] - self.training_inputs[(j, k)])
                    / self.kernel_lengthscales[k];
                q += diff * diff;
            }
            self.kernel_amplitude * (-0.5 * q).exp()
        })
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let z = self.standardize(x);
        let mut value = self.intercept
            + self
                .linear_part
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>();
        for i in 0..self.training_inputs.nrows() {
            value += self.weights[i] * self.kernel(i, &z);
        }
        value
    }

    /// Analytic gradient in raw input coordinates: the affine part plus the
    /// kernel derivative sum, with the chain-rule factor of the input
    /// standardization.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let z = self.standardize(x);
        let d = z.len();
        let mut grad: Vec<f64> = self.linear_part.iter().copied().collect();
        for i in 0..self.training_inputs.nrows() {
            let k = self.weights[i] * self.kernel(i, &z);
            for j in 0..d {
                let ell = self.kernel_lengthscales[j];
                grad[j] += k * (self.training_inputs[(i, j)] - z[j])
                    / (ell * ell * self.input_scales[j]);
            }
        }
        grad
    }
}

/// Objective for [`adjust_gpr_coefficients`].
#[derive(Debug, Clone)]
pub enum AdjustObjective {
    Quantile(QuantileLevel),
    Distorted(MinMaxVar, Side),
}

const MAX_ROWS: usize = 10_000;
const JITTER_FACTOR: f64 = 1e-12;

/// Fits a GPR boundary with default options (estimated kernel and noise,
/// 8 restarts, seed 0).
pub fn fit_gpr(d: &Dataset) -> Result<GprBoundary> {
    fit_gpr_with(d, &GprOptions::default())
}

/// Fits a GPR boundary. Kernel hyperparameters maximize the Gaussian
/// marginal likelihood (unless fixed); the affine mean is profiled out by
/// generalized least squares whenever `n >= d + 2`, otherwise the prior mean
/// is zero. Representer weights solve `(K + noise I) w = y - mean`.
pub fn fit_gpr_with(d: &Dataset, opts: &GprOptions) -> Result<GprBoundary> {
    let n = d.len();
    let dim = d.dim();
    if n > MAX_ROWS {
        return Err(Error::InvalidParameter(format!(
            "dense GPR fit is limited to {MAX_ROWS} rows, got {n}"
        )));
    }

    // standardize inputs
    let mut means = DVector::zeros(dim);
    let mut scales = DVector::zeros(dim);
    for j in 0..dim {
        let col = d.inputs().column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        means[j] = mean;
        scales[j] = if sd > 0.0 { sd } else { 1.0 };
    }
    let z = DMatrix::from_fn(n, dim, |i, j| (d.inputs()[(i, j)] - means[j]) / scales[j]);
    let y = d.targets().clone();
    let var_y = {
        let m = y.iter().sum::<f64>() / n as f64;
        (y.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n as f64).max(1e-300)
    };
    let use_basis = n >= dim + 2;

    let solve_for = |ls: &[f64], amp: f64, noise: f64| -> Result<GpSolve> {
        gp_solve(&z, &y, ls, amp, noise, use_basis)
    };

    // assemble the hyperparameter search space
    let (fixed_ls, fixed_amp) = match &opts.kernel {
        KernelSpec::Fixed {
            lengthscales,
            amplitude,
        } => {
            if lengthscales.len() != dim {
                return Err(Error::InvalidParameter(format!(
                    "expected {dim} lengthscales, got {}",
                    lengthscales.len()
                )));
            }
            if lengthscales.iter().any(|&l| !(l > 0.0)) || !(*amplitude > 0.0) {
                return Err(Error::InvalidParameter(
                    "fixed kernel hyperparameters must be positive".into(),
                ));
            }
            (Some(lengthscales.clone()), Some(*amplitude))
        }
        KernelSpec::Estimate => (None, None),
    };
    let fixed_noise = match opts.noise {
        NoiseSpec::Fixed(v) => {
            if !(v >= 0.0) {
                return Err(Error::InvalidParameter(
                    "fixed noise variance must be nonnegative".into(),
                ));
            }
            Some(v)
        }
        NoiseSpec::Estimate => None,
    };

    let estimate_kernel = fixed_ls.is_none();
    let estimate_noise = fixed_noise.is_none();
    let (best_ls, best_amp, best_noise) = if !estimate_kernel && !estimate_noise {
        (fixed_ls.unwrap(), fixed_amp.unwrap(), fixed_noise.unwrap())
    } else {
        // theta layout: [ln ls; ln amp] (if kernel estimated) ++ [ln noise]
        let theta_dim = if estimate_kernel { dim + 1 } else { 0 }
            + if estimate_noise { 1 } else { 0 };
        let unpack = |theta: &[f64]| -> (Vec<f64>, f64, f64) {
            let mut idx = 0;
            let (ls, amp) = if estimate_kernel {
                let ls: Vec<f64> = theta[..dim].iter().map(|t| t.exp()).collect();
                let amp = theta[dim].exp();
                idx = dim + 1;
                (ls, amp)
            } else {
                (fixed_ls.clone().unwrap(), fixed_amp.unwrap())
            };
            let noise = if estimate_noise {
                theta[idx].exp()
            } else {
                fixed_noise.unwrap()
            };
            (ls, amp, noise)
        };

        let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
        let restarts = opts.restarts.max(1);
        let mut best: Option<(f64, Vec<f64>)> = None;
        for attempt in 0..restarts {
            let mut theta = Vec::with_capacity(theta_dim);
            if estimate_kernel {
                for _ in 0..dim {
                    if attempt == 0 {
                        theta.push(0.0); // lengthscale 1 in standardized space
                    } else {
                        // log-uniform in [1e-2, 1e1]
                        let u: f64 = rng.random();
                        theta.push((1e-2f64).ln() + u * ((1e1f64).ln() - (1e-2f64).ln()));
                    }
                }
                if attempt == 0 {
                    theta.push(var_y.ln());
                } else {
                    let u: f64 = rng.random();
                    theta.push((0.25 * var_y).ln() + u * (16.0f64).ln());
                }
            }
            if estimate_noise {
                if attempt == 0 {
                    theta.push((0.05 * var_y).ln());
                } else {
                    let u: f64 = rng.random();
                    theta.push((1e-4 * var_y).ln() + u * ((0.5 * var_y).ln() - (1e-4 * var_y).ln()));
                }
            }

            let objective = |t: &[f64]| -> f64 {
                let (ls, amp, noise) = unpack(t);
                match solve_for(&ls, amp, noise) {
                    Ok(s) => s.nll,
                    Err(_) => f64::INFINITY,
                }
            };
            let (t_best, value) = nelder_mead(objective, &theta, 0.4, 1e-9, 150 * theta_dim.max(1));
            // ties resolved by the first (lowest-index) restart
            let improves = match &best {
                None => true,
                Some((v, _)) => value < *v,
            };
            if value.is_finite() && improves {
                best = Some((value, t_best));
            }
        }
        let (_, t_best) =
            best.ok_or_else(|| Error::LinearAlgebra("no positive-definite kernel found".into()))?;
        unpack(&t_best)
    };

    let solved = solve_for(&best_ls, best_amp, best_noise)?;

    // map the affine mean back to raw coordinates
    let (intercept, linear_part) = destandardize_mean(&solved.beta, &means, &scales, dim);

    Ok(GprBoundary {
        kernel_lengthscales: DVector::from_vec(best_ls),
        kernel_amplitude: best_amp,
        noise_variance: best_noise,
        training_inputs: z,
        weights: solved.weights,
        intercept,
        linear_part,
        input_means: means,
        input_scales: scales,
    })
}

/// Re-optimizes the representer weights and affine mean of a fitted boundary
/// against a quantile or distorted objective, keeping the kernel
/// hyperparameters (and noise) frozen. `d` must be the dataset the boundary
/// was fitted on.
pub fn adjust_gpr_coefficients(
    g: &GprBoundary,
    d: &Dataset,
    objective: &AdjustObjective,
) -> Result<GprBoundary> {
    let n = d.len();
    let dim = d.dim();
    if g.training_inputs.nrows() != n || g.training_inputs.ncols() != dim {
        return Err(Error::InvalidParameter(
            "adjustment dataset does not match the fitted boundary".into(),
        ));
    }
    let z = DMatrix::from_fn(n, dim, |i, j| {
        (d.inputs()[(i, j)] - g.input_means[j]) / g.input_scales[j]
    });
    let y = d.targets();
    let kernel = g.kernel_matrix();

    // warm start from the fitted model, in standardized coordinates
    let mut beta0 = g.intercept;
    let mut beta = DVector::zeros(dim);
    for j in 0..dim {
        beta[j] = g.linear_part[j] * g.input_scales[j];
        beta0 += g.linear_part[j] * g.input_means[j];
    }

    let (new_b0, new_beta, new_alpha) = match objective {
        AdjustObjective::Quantile(tau) => {
            adjust_quantile(&z, y, &kernel, g, beta0, &beta, *tau)?
        }
        AdjustObjective::Distorted(dist, side) => {
            adjust_distorted(&z, y, &kernel, g, dist, *side)?
        }
    };

    let full: Vec<f64> = std::iter::once(new_b0)
        .chain(new_beta.iter().copied())
        .collect();
    let (intercept, linear_part) = destandardize_mean(&full, &g.input_means, &g.input_scales, dim);
    Ok(GprBoundary {
        weights: new_alpha,
        intercept,
        linear_part,
        ..g.clone()
    })
}

fn adjust_quantile(
    z: &DMatrix<f64>,
    y: &DVector<f64>,
    kernel: &DMatrix<f64>,
    g: &GprBoundary,
    beta0: f64,
    beta: &DVector<f64>,
    tau: QuantileLevel,
) -> Result<(f64, DVector<f64>, DVector<f64>)> {
    let n = z.nrows();
    let dim = z.ncols();
    let p = 1 + dim + n;

    // asymmetric-Laplace scale from the fitted residuals, so the loss and the
    // prior penalty keep the balance the Gaussian fit had; the extra
    // 4 tau (1 - tau) factor shrinks the loss weight at extreme levels,
    // where only a fraction tau (1 - tau) of the sample carries information
    // and an unshrunk representer fit turns optimistic
    let t = tau.value();
    let mut resid_scale = 0.0;
    for i in 0..n {
        let pred = g.predict(&unstandardized_row(z, g, i));
        resid_scale += (y[i] - pred).abs();
    }
    resid_scale = (resid_scale / n as f64).max(1e-8 * scale_of(y));
    resid_scale /= 4.0 * t * (1.0 - t);

    // design [1 Z K]
    let design = DMatrix::from_fn(n, p, |i, j| {
        if j == 0 {
            1.0
        } else if j <= dim {
            z[(i, j - 1)]
        } else {
            kernel[(i, j - 1 - dim)]
        }
    });

    let mut v = DVector::zeros(p);
    v[0] = beta0;
    for j in 0..dim {
        v[1 + j] = beta[j];
    }
    for i in 0..n {
        v[1 + dim + i] = g.weights[i];
    }

    let value_grad = |v: &DVector<f64>, alpha_sm: f64| -> (f64, DVector<f64>, DVector<f64>) {
        let preds = &design * v;
        let alpha_part = DVector::from_fn(n, |i, _| v[1 + dim + i]);
        let ka = kernel * &alpha_part;
        let mut value = 0.5 * alpha_part.dot(&ka);
        let mut s = DVector::zeros(n);
        let mut curvature = DVector::zeros(n);
        for i in 0..n {
            let u = y[i] - preds[i];
            value += smoothed_pinball(u, tau, alpha_sm) / resid_scale;
            s[i] = -smoothed_pinball_grad(u, tau, alpha_sm) / resid_scale;
            // d2/du2 of the smoothed check: logistic'(-u/alpha) / alpha
            let t = (-u / alpha_sm).clamp(-500.0, 500.0);
            let sig = 1.0 / (1.0 + (-t).exp());
            curvature[i] = (sig * (1.0 - sig) / alpha_sm / resid_scale).max(1e-300);
        }
        let mut grad = design.transpose() * &s;
        for i in 0..n {
            grad[1 + dim + i] += ka[i];
        }
        (value, grad, curvature)
    };

    // damped Newton with smoothing continuation down to the target width;
    // the explicit Hessian sidesteps the kernel's poor conditioning and the
    // warm starts keep the active set stable as the check function sharpens
    let widths = [1e-2 * resid_scale.max(1e-2), 1e-3, DEFAULT_SMOOTHING];
    let mut final_ok = false;
    for (stage, &alpha_sm) in widths.iter().enumerate() {
        let (mut value, mut grad, mut curvature) = value_grad(&v, alpha_sm);
        let grad_scale = grad.amax().max(1.0);
        for _ in 0..80 {
            if grad.amax() <= 1e-8 * grad_scale {
                break;
            }
            let mut hess = DMatrix::zeros(p, p);
            for i in 0..n {
                let w = curvature[i];
                for a in 0..p {
                    let da = design[(i, a)];
                    if da == 0.0 {
                        continue;
                    }
                    for b in a..p {
                        hess[(a, b)] += w * da * design[(i, b)];
                    }
                }
            }
            for a in 0..p {
                for b in 0..a {
                    hess[(a, b)] = hess[(b, a)];
                }
            }
            for a in 0..n {
                for b in 0..n {
                    hess[(1 + dim + a, 1 + dim + b)] += kernel[(a, b)];
                }
            }
            let mut jitter = 1e-12 * (1.0 + hess.diagonal().amax());
            let step = loop {
                let mut damped = hess.clone();
                for a in 0..p {
                    damped[(a, a)] += jitter;
                }
                match damped.cholesky() {
                    Some(ch) => break ch.solve(&grad),
                    None => {
                        jitter *= 100.0;
                        if jitter > 1e6 * (1.0 + hess.diagonal().amax()) {
                            return Err(Error::LinearAlgebra(
                                "quantile adjustment Hessian not positive definite".into(),
                            ));
                        }
                    }
                }
            };

            // backtracking on the true objective
            let mut step_size = 1.0;
            let descent = grad.dot(&step);
            let mut advanced = false;
            for _ in 0..60 {
                let candidate = &v - step_size * &step;
                let (cand_value, cand_grad, cand_curv) = value_grad(&candidate, alpha_sm);
                if cand_value <= value - 1e-4 * step_size * descent + 1e-15 * value.abs() {
                    v = candidate;
                    value = cand_value;
                    grad = cand_grad;
                    curvature = cand_curv;
                    advanced = true;
                    break;
                }
                step_size *= 0.5;
            }
            if !advanced {
                break; // no further progress at f64 resolution
            }
        }
        if stage + 1 == widths.len() {
            final_ok = grad.amax() <= 1e-4 * grad_scale;
            if !final_ok {
                return Err(Error::OptimNonConvergence {
                    iterations: 80,
                    grad_norm: grad.amax(),
                });
            }
        }
    }
    debug_assert!(final_ok);

    let b0 = v[0];
    let b = DVector::from_fn(dim, |j, _| v[1 + j]);
    let a = DVector::from_fn(n, |i, _| v[1 + dim + i]);
    Ok((b0, b, a))
}

fn adjust_distorted(
    z: &DMatrix<f64>,
    y: &DVector<f64>,
    kernel: &DMatrix<f64>,
    g: &GprBoundary,
    dist: &MinMaxVar,
    side: Side,
) -> Result<(f64, DVector<f64>, DVector<f64>)> {
    let n = z.nrows();
    let dim = z.ncols();
    let p = 1 + dim + n;
    let increments = rank_weights(n, dist, side)?;
    let sigma2 = g.noise_variance.max(1e-10 * scale_of(y).powi(2));

    // design [1 Z K]
    let design = DMatrix::from_fn(n, p, |i, j| {
        if j == 0 {
            1.0
        } else if j <= dim {
            z[(i, j - 1)]
        } else {
            kernel[(i, j - 1 - dim)]
        }
    });

    let mut weights = vec![1.0 / n as f64; n];
    let mut coef = DVector::zeros(p);
    coef[0] = y.iter().sum::<f64>() / n as f64;
    let mut eta = 0.5;
    let mut prev_delta = f64::INFINITY;

    for iter in 0..500 {
        // damped rank-weight update; the step decays if the rank map
        // oscillates at a boundary
        let residuals: Vec<f64> = (0..n)
            .map(|i| y[i] - design.row(i).transpose().dot(&coef))
            .collect();
        if iter > 0 {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| residuals[a].total_cmp(&residuals[b]));
            for (rank, &idx) in order.iter().enumerate() {
                weights[idx] = (1.0 - eta) * weights[idx] + eta * increments[rank];
            }
        }

        // normal equations with the GP prior on the representer block:
        // (n / sigma^2) D' W D + blockdiag(eps, eps, K)
        let mut normal: DMatrix<f64> = DMatrix::zeros(p, p);
        let mut rhs: DVector<f64> = DVector::zeros(p);
        let lam = n as f64 / sigma2;
        for i in 0..n {
            let w = lam * weights[i];
            for a in 0..p {
                let da = design[(i, a)];
                if da == 0.0 {
                    continue;
                }
                rhs[a] += w * da * y[i];
                for b in a..p {
                    normal[(a, b)] += w * da * design[(i, b)];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                normal[(a, b)] = normal[(b, a)];
            }
        }
        let ridge = 1e-10 * (1.0 + normal[(0, 0)].abs());
        for j in 0..=dim {
            normal[(j, j)] += ridge;
        }
        for a in 0..n {
            for b in 0..n {
                normal[(1 + dim + a, 1 + dim + b)] += kernel[(a, b)];
            }
        }
        let alpha_jitter = 1e-10 * (1.0 + g.kernel_amplitude) * n as f64 / sigma2;
        for a in 0..n {
            normal[(1 + dim + a, 1 + dim + a)] += alpha_jitter;
        }

        let next = normal
            .cholesky()
            .map(|ch| ch.solve(&rhs))
            .ok_or_else(|| Error::LinearAlgebra("distorted adjustment system singular".into()))?;
        let delta = (&next - &coef).amax();
        coef = next;
        if delta < 1e-10 {
            break;
        }
        if delta >= 0.9999 * prev_delta {
            eta = (0.5 * eta).max(1e-14);
        }
        prev_delta = delta;
        if iter == 499 {
            return Err(Error::OptimNonConvergence {
                iterations: 500,
                grad_norm: delta,
            });
        }
    }

    let b0 = coef[0];
    let b = DVector::from_fn(dim, |j, _| coef[1 + j]);
    let a = DVector::from_fn(n, |i, _| coef[1 + dim + i]);
    Ok((b0, b, a))
}

struct GpSolve {
    beta: Vec<f64>, // empty when no basis is used
    weights: DVector<f64>,
    nll: f64,
}

fn gp_solve(
    z: &DMatrix<f64>,
    y: &DVector<f64>,
    ls: &[f64],
    amp: f64,
    noise: f64,
    use_basis: bool,
) -> Result<GpSolve> {
    let n = z.nrows();
    let dim = z.ncols();
    let jitter = JITTER_FACTOR * amp;
    let mut k = DMatrix::from_fn(n, n, |i, j| {
        let mut q = 0.0;
        for m in 0..dim {
            let diff = (z[(i, m)] - z[(j, m)]) / ls[m];
            q += diff * diff;
        }
        amp * (-0.5 * q).exp()
    });
    for i in 0..n {
        k[(i, i)] += noise + jitter;
    }
    let chol = k
        .cholesky()
        .ok_or_else(|| Error::LinearAlgebra("kernel matrix is not positive definite".into()))?;

    let logdet_half: f64 = (0..n).map(|i| chol.l_dirty()[(i, i)].ln()).sum();

    let (beta, residual) = if use_basis {
        let p = dim + 1;
        let h = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { z[(i, j - 1)] });
        let kinv_h = chol.solve(&h);
        let kinv_y = chol.solve(y);
        let m = h.transpose() * &kinv_h;
        let rhs = h.transpose() * &kinv_y;
        match m.cholesky() {
            Some(mc) => {
                let beta = mc.solve(&rhs);
                let residual = y - &h * &beta;
                (beta.iter().copied().collect::<Vec<f64>>(), residual)
            }
            None => (Vec::new(), y.clone()),
        }
    } else {
        (Vec::new(), y.clone())
    };

    let weights = chol.solve(&residual);
    let nll = 0.5 * residual.dot(&weights)
        + logdet_half
        + 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln();
    Ok(GpSolve {
        beta,
        weights,
        nll,
    })
}

fn destandardize_mean(
    beta: &[f64],
    means: &DVector<f64>,
    scales: &DVector<f64>,
    dim: usize,
) -> (f64, DVector<f64>) {
    if beta.is_empty() {
        return (0.0, DVector::zeros(dim));
    }
    let mut intercept = beta[0];
    let mut linear = DVector::zeros(dim);
    for j in 0..dim {
        let c = beta[j + 1] / scales[j];
        linear[j] = c;
        intercept -= c * means[j];
    }
    (intercept, linear)
}

fn split_params(v: &[f64], dim: usize, n: usize) -> (f64, DVector<f64>, DVector<f64>) {
    let b0 = v[0];
    let b = DVector::from_column_slice(&v[1..1 + dim]);
    let a = DVector::from_column_slice(&v[1 + dim..1 + dim + n]);
    (b0, b, a)
}

fn scale_of(y: &DVector<f64>) -> f64 {
    let n = y.len() as f64;
    let m = y.iter().sum::<f64>() / n;
    (y.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n)
        .sqrt()
        .max(1e-300)
}

fn unstandardized_row(z: &DMatrix<f64>, g: &GprBoundary, i: usize) -> Vec<f64> {
    (0..z.ncols())
        .map(|j| z[(i, j)] * g.input_scales[j] + g.input_means[j])
        .collect()
}
