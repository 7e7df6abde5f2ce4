//! Pinball (check) loss and its smooth softplus surrogate.

use super::QuantileLevel;

/// Smoothing width used by the quantile fitters.
pub const DEFAULT_SMOOTHING: f64 = 1e-4;

/// Exact pinball loss of a residual vector at level `tau`, with residuals
/// taken as *prediction minus target*:
/// `(1 - tau) * sum r+  +  tau * sum (-r)+`.
///
/// Minimizing this over predictions places the fit at the `tau`-quantile of
/// the targets (a fraction `tau` of targets ends up below the fit).
pub fn pinball_loss(residuals: &[f64], tau: QuantileLevel) -> f64 {
    let t = tau.value();
    residuals
        .iter()
        .map(|&r| if r >= 0.0 { (1.0 - t) * r } else { -t * r })
        .sum()
}

/// Smooth surrogate of the check function `rho_tau(x) = x (tau - 1{x<0})`
/// evaluated at `x` (here `x` is *target minus prediction*):
/// `tau * x + alpha * softplus(-x / alpha)`.
///
/// Converges to the check function as `alpha -> 0` with uniform gap at most
/// `alpha * ln 2`, attained at `x = 0`. The softplus is evaluated in its
/// overflow-free branch form.
pub fn smoothed_pinball(x: f64, tau: QuantileLevel, alpha: f64) -> f64 {
    tau.value() * x + alpha * softplus(-x / alpha)
}

/// Derivative of [`smoothed_pinball`] in `x`: `tau - logistic(-x/alpha)`,
/// tending to `tau` for large positive `x` and `tau - 1` for large negative.
pub fn smoothed_pinball_grad(x: f64, tau: QuantileLevel, alpha: f64) -> f64 {
    tau.value() - logistic(-x / alpha)
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
