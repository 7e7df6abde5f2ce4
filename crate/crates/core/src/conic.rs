//! Risk-neutral acceptance machinery: measure distortions of Levy tails,
//! closed-form valuation bounds over gain-scale intervals, the bid-ask
//! boundary equations, Fenchel conjugate budget curves, the perturbation
//! curves `S` and `S~` in exponential integrals, grid membership checks and
//! the maximal frequency-stress `kappa_p`.

use crate::bg::BgParams;
use crate::error::{Error, Result};
use crate::num::{bisect, expint_e1, integrate};

/// Measure-distortion pair `(c, gamma)`: `c` stresses jump frequencies,
/// `gamma` stresses the tail reweighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyDistortionPair {
    pub c: f64,
    pub gamma: f64,
}

impl LevyDistortionPair {
    pub fn new(c: f64, gamma: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() || !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "distortion pair requires positive entries, got ({c}, {gamma})"
            )));
        }
        Ok(Self { c, gamma })
    }
}

/// Gain-scale interval `[b_low, b_high]` around a reference scale `b_hat`,
/// with the gain speed `c_p` that stays fixed across the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleInterval {
    pub b_hat: f64,
    pub b_low: f64,
    pub b_high: f64,
    pub c_p: f64,
}

impl ScaleInterval {
    pub fn new(b_hat: f64, b_low: f64, b_high: f64, c_p: f64) -> Result<Self> {
        let iv = Self {
            b_hat,
            b_low,
            b_high,
            c_p,
        };
        iv.validate()?;
        Ok(iv)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b_low > 0.0 && self.b_low <= self.b_hat && self.b_hat <= self.b_high)
            || !(self.b_high < 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "scale interval must satisfy 0 < b_low <= b_hat <= b_high < 1, got \
                 ({}, {}, {})",
                self.b_low, self.b_hat, self.b_high
            )));
        }
        if !(self.c_p > 0.0) || !self.c_p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "c_p must be positive, got {}",
                self.c_p
            )));
        }
        Ok(())
    }
}

/// Upper measure distortion `G+(x) = x + (1 - e^{-cx})^{1/(1+gamma)} / c`
/// for `x >= 0`.
pub fn g_plus(d: &LevyDistortionPair, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    x + (1.0 - (-d.c * x).exp()).powf(1.0 / (1.0 + d.gamma)) / d.c
}

/// Lower measure distortion `G-(x) = x - (1 - e^{-cx}) / c` for `x >= 0`.
pub fn g_minus(d: &LevyDistortionPair, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    x - (1.0 - (-d.c * x).exp()) / d.c
}

/// Distorted reward interval: tail masses of `e^X - 1` under the Levy
/// measure are passed through `G+`/`G-` and integrated,
///
/// `lower = omega - int G+(nu(e^x - 1 < -a)) da + int G-(nu(e^x - 1 > a)) da`
///
/// and `upper` with the two distortions swapped. The gain-tail integral
/// diverges once `b_p >= 1` (for the `G-` leg) or `b_p (1 + gamma) >= 1`
/// (for the `G+` leg); both report as errors.
pub fn distorted_reward_bounds(
    p: &BgParams,
    omega: f64,
    d: &LevyDistortionPair,
) -> Result<(f64, f64)> {
    p.validate()?;
    if !omega.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "omega must be finite, got {omega}"
        )));
    }
    if p.b_p >= 1.0 {
        return Err(Error::Divergent(format!(
            "gain tail of e^X - 1 is not integrable for b_p = {} >= 1",
            p.b_p
        )));
    }
    if p.b_p * (1.0 + d.gamma) >= 1.0 {
        return Err(Error::Divergent(format!(
            "upper distorted gain tail diverges: b_p (1 + gamma) = {} >= 1",
            p.b_p * (1.0 + d.gamma)
        )));
    }

    // nu(e^x - 1 > a) = c_p E1(ln(1+a)/b_p); substitute a = e^u - 1
    let gain_tail = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        p.c_p * expint_e1(u / p.b_p).unwrap_or(0.0)
    };
    // nu(e^x - 1 < -a) = c_n E1(-ln(1-a)/b_n) on 0 < a < 1
    let loss_tail = |a: f64| -> f64 {
        if a <= 0.0 || a >= 1.0 {
            return 0.0;
        }
        p.c_n * expint_e1(-(1.0 - a).ln() / p.b_n).unwrap_or(0.0)
    };

    // truncation where the slowest-decaying transformed gain integrand is
    // negligible: integrand ~ exp(-u (1/(b_p(1+gamma)) - 1))
    let slowest_rate = (1.0 / (p.b_p * (1.0 + d.gamma)) - 1.0).min(1.0 / p.b_p - 1.0);
    let u_max = 80.0 / slowest_rate.max(1e-3) + 10.0;

    let quad_gain = |dist: &dyn Fn(f64) -> f64| -> Result<f64> {
        integrate(|u| dist(gain_tail(u)) * u.exp(), 0.0, u_max, 1e-9)
    };
    let quad_loss = |dist: &dyn Fn(f64) -> f64| -> Result<f64> {
        integrate(|a| dist(loss_tail(a)), 0.0, 1.0, 1e-9)
    };

    let dc = *d;
    let lower = omega - quad_loss(&|x| g_plus(&dc, x))? + quad_gain(&|x| g_minus(&dc, x))?;
    let upper = omega - quad_loss(&|x| g_minus(&dc, x))? + quad_gain(&|x| g_plus(&dc, x))?;
    Ok((lower, upper))
}

/// Valuation bounds of one discounted dollar over the interval:
/// `inf = ((1 - b_hat)/(1 - b_low))^c_p <= 1 <= ((1 - b_hat)/(1 - b_high))^c_p = sup`.
pub fn valuation_bounds_over_interval(iv: &ScaleInterval) -> Result<(f64, f64)> {
    iv.validate()?;
    let inf = ((1.0 - iv.b_hat) / (1.0 - iv.b_low)).powf(iv.c_p);
    let sup = ((1.0 - iv.b_hat) / (1.0 - iv.b_high)).powf(iv.c_p);
    Ok((inf, sup))
}

/// Solves the bid-ask boundary relation
/// `ratio = ((1 - b_high)/(1 - b_low))^c_p` for the upper scale:
/// `b_high = 1 - ratio^{1/c_p} (1 - b_low)`.
pub fn solve_upper_scale(b_low: f64, ratio: f64, c_p: f64) -> Result<f64> {
    if !(b_low > 0.0 && b_low < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "b_low must lie in (0,1), got {b_low}"
        )));
    }
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "bid-ask ratio must lie in (0,1], got {ratio}"
        )));
    }
    if !(c_p > 0.0) {
        return Err(Error::InvalidParameter(format!("c_p must be positive, got {c_p}")));
    }
    if ratio == 1.0 {
        return Ok(b_low);
    }
    let b_high = 1.0 - ratio.powf(1.0 / c_p) * (1.0 - b_low);
    if !(b_high > 0.0 && b_high < 1.0) {
        return Err(Error::Domain(format!(
            "solved upper scale {b_high} falls outside (0,1)"
        )));
    }
    Ok(b_high)
}

/// Residual of the two-sided boundary relation:
/// `ratio - ((1-b_high_p)/(1-b_low_p))^c_p ((1+b_low_n)/(1+b_high_n))^c_n`.
pub fn two_sided_boundary_residual(
    gain_bounds: (f64, f64),
    loss_bounds: (f64, f64),
    c_p: f64,
    c_n: f64,
    ratio: f64,
) -> f64 {
    let (bp_low, bp_high) = gain_bounds;
    let (bn_low, bn_high) = loss_bounds;
    let product = ((1.0 - bp_high) / (1.0 - bp_low)).powf(c_p)
        * ((1.0 + bn_low) / (1.0 + bn_high)).powf(c_n);
    ratio - product
}

/// The implicit transition point `u(lambda) in (0,1)` solving
/// `u / (1-u)^{gamma/(1+gamma)} = (lambda - 1)(1 + gamma)` for `lambda > 1`.
pub fn solve_u(lambda: f64, gamma: f64) -> Result<f64> {
    if !(lambda > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must exceed 1, got {lambda}"
        )));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let rhs = (lambda - 1.0) * (1.0 + gamma);
    let e = gamma / (1.0 + gamma);
    // f is strictly increasing from 0 to +inf on (0,1)
    let f = |u: f64| u / (1.0 - u).powf(e) - rhs;
    bisect(f, 1e-300, 1.0 - 1e-16, 0.0)
}

/// Budget curve `Phi(lambda)` for `lambda > 1`: the Fenchel conjugate of
/// `G+`, `Phi = [-(1-lambda) log u + (1-u)^{1/(1+gamma)}] / c` with
/// `u = u(lambda)`. Decreasing from `1/c` at `lambda -> 1+` to 0.
pub fn phi_conj(lambda: f64, d: &LevyDistortionPair) -> Result<f64> {
    let u = solve_u(lambda, d.gamma)?;
    Ok(((lambda - 1.0) * u.ln() + (1.0 - u).powf(1.0 / (1.0 + d.gamma))) / d.c)
}

/// Budget curve `-Phi~(lambda)` for `lambda in [0,1)`: the negated Fenchel
/// conjugate of `G-`, `[lambda + (1-lambda) log(1-lambda)] / c`. Increasing
/// from 0 to `1/c` as `lambda -> 1-`.
pub fn phi_tilde_conj(lambda: f64, d: &LevyDistortionPair) -> Result<f64> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda must lie in [0,1), got {lambda}"
        )));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let onem = 1.0 - lambda;
    Ok((lambda + onem * onem.ln()) / d.c)
}

/// Perturbation curve for the upper scale `b` against the reference `b_hat`:
/// `S(lambda) = c_p [E1(L/b) - lambda E1(L/b_hat)]` with
/// `L = log(lambda) b b_hat / (b - b_hat)`; at `lambda = 1` the Frullani
/// limit `c_p log(b / b_hat)` is served. Zero when `b = b_hat`.
pub fn s_lambda(iv: &ScaleInterval, lambda: f64) -> Result<f64> {
    iv.validate()?;
    s_curve_upper(iv.b_hat, iv.b_high, iv.c_p, lambda)
}

/// Perturbation curve for the lower scale:
/// `S~(lambda) = c_p [lambda E1(L~/b_hat) - E1(L~/b_low)]` with
/// `L~ = -log(lambda) b_hat b_low / (b_hat - b_low)` on `0 < lambda <= 1`;
/// `lambda = 1` serves the Frullani limit `c_p log(b_hat / b_low)`.
pub fn s_tilde_lambda(iv: &ScaleInterval, lambda: f64) -> Result<f64> {
    iv.validate()?;
    s_curve_lower(iv.b_hat, iv.b_low, iv.c_p, lambda)
}

fn s_curve_upper(b_hat: f64, b: f64, c_p: f64, lambda: f64) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "the upper curve needs lambda >= 1, got {lambda}"
        )));
    }
    if b == b_hat {
        return Ok(0.0);
    }
    if lambda == 1.0 {
        return Ok(c_p * (b / b_hat).ln());
    }
    let log_lambda = (lambda - 1.0).ln_1p();
    let level = log_lambda * b * b_hat / (b - b_hat);
    Ok(c_p * (expint_e1(level / b)? - lambda * e1_or_zero(level / b_hat)))
}

fn s_curve_lower(b_hat: f64, b: f64, c_p: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "the lower curve needs lambda in (0,1], got {lambda}"
        )));
    }
    if b == b_hat {
        return Ok(0.0);
    }
    if lambda == 1.0 {
        return Ok(c_p * (b_hat / b).ln());
    }
    let level = -(lambda - 1.0).ln_1p() * b_hat * b / (b_hat - b);
    Ok(c_p * (lambda * e1_or_zero(level / b_hat) - e1_or_zero(level / b)))
}

// E1 underflows to zero for large arguments; treat that as exact zero
fn e1_or_zero(z: f64) -> f64 {
    expint_e1(z).unwrap_or(0.0)
}

/// Largest admissible frequency stress from the lower-scale condition,
/// `1 / (c_p log(b_hat / b_low))` (infinite when the interval is degenerate
/// below). Requires the lemma hypothesis `b_low > 0.55 b_hat`.
pub fn condition_lower_max_c(iv: &ScaleInterval) -> Result<f64> {
    iv.validate()?;
    if iv.b_low <= 0.55 * iv.b_hat {
        return Err(Error::Domain(format!(
            "lower-scale condition requires b_low > 0.55 b_hat, got {} <= {}",
            iv.b_low,
            0.55 * iv.b_hat
        )));
    }
    if iv.b_low == iv.b_hat {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (iv.c_p * (iv.b_hat / iv.b_low).ln()))
}

/// Minimal tail stress `gamma~ = (b_high - b_hat) / b_hat` below which the
/// upper scale cannot be acceptable.
pub fn gamma_tilde(iv: &ScaleInterval) -> f64 {
    (iv.b_high - iv.b_hat) / iv.b_hat
}

/// Frequency-stress cap `c~ = min(condition_lower_max_c, 1/c_p)`.
pub fn c_tilde(iv: &ScaleInterval) -> Result<f64> {
    Ok(condition_lower_max_c(iv)?.min(1.0 / iv.c_p))
}

const GRID_POINTS: usize = 2000;
const LAMBDA_MAX: f64 = 50.0;

// lambda grid for the upper side: 1 + logspace(1e-6, 49), dense near 1
fn upper_grid() -> Vec<f64> {
    let lo = 1e-6f64.ln();
    let hi = (LAMBDA_MAX - 1.0).ln();
    (0..GRID_POINTS)
        .map(|i| 1.0 + (lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect()
}

// lambda grid for the lower side: 1 - logspace offsets, spanning
// [1e-6, 1 - 1e-6] with density near 1
fn lower_grid() -> Vec<f64> {
    let lo = 1e-6f64.ln();
    let hi = (1.0 - 1e-6f64).ln();
    (0..GRID_POINTS)
        .map(|i| 1.0 - (lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect()
}

/// Membership of the scale-perturbed Levy measure `nu_b` in the acceptance
/// set defined by the distortion pair: on the side selected by the sign of
/// `b - b_hat`, the perturbation curve must stay below the budget curve on a
/// 2000-point log-spaced lambda grid (`(1, 50]` above, `[1e-6, 1-1e-6]`
/// below).
pub fn check_membership(iv: &ScaleInterval, b: f64, d: &LevyDistortionPair) -> Result<bool> {
    iv.validate()?;
    if !(b >= iv.b_low && b <= iv.b_high) {
        return Err(Error::InvalidParameter(format!(
            "b = {b} outside the interval [{}, {}]",
            iv.b_low, iv.b_high
        )));
    }
    if b == iv.b_hat {
        return Ok(true);
    }
    if b > iv.b_hat {
        for lambda in upper_grid() {
            let s = s_curve_upper(iv.b_hat, b, iv.c_p, lambda)?;
            if s > phi_conj(lambda, d)? {
                return Ok(false);
            }
        }
    } else {
        for lambda in lower_grid() {
            let s = s_curve_lower(iv.b_hat, b, iv.c_p, lambda)?;
            if s > phi_tilde_conj(lambda, d)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Maximal frequency stress `kappa_p(gamma)` keeping the upper scale
/// acceptable: the largest `c` in `(0, c~]` with
/// `check_membership(iv, b_high, (c, gamma))`, by bisection to 1e-6
/// relative. Requires `gamma > gamma~` strictly.
pub fn kappa_p(iv: &ScaleInterval, gamma: f64) -> Result<f64> {
    iv.validate()?;
    let threshold = gamma_tilde(iv);
    if !(gamma > threshold) {
        return Err(Error::Domain(format!(
            "kappa_p needs gamma > gamma~ = {threshold}, got {gamma}"
        )));
    }
    let cap = c_tilde(iv)?;
    let member = |c: f64| -> Result<bool> {
        check_membership(iv, iv.b_high, &LevyDistortionPair::new(c, gamma)?)
    };
    if member(cap)? {
        return Ok(cap);
    }
    let floor = 1e-6;
    if !member(floor)? {
        return Err(Error::Domain(format!(
            "membership fails even at c = {floor}; gamma = {gamma} is too close to gamma~"
        )));
    }
    let mut lo = floor;
    let mut hi = cap;
    while hi - lo > 1e-6 * lo {
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(c: f64, gamma: f64) -> LevyDistortionPair {
        LevyDistortionPair::new(c, gamma).unwrap()
    }

    fn narrow_interval() -> ScaleInterval {
        ScaleInterval::new(0.02, 0.015, 0.027, 9.0).unwrap()
    }

    #[test]
    fn g_pair_examples() {
        let d = pair(2.0, 0.75);
        assert_eq!(g_plus(&d, 0.0), 0.0);
        assert_eq!(g_minus(&d, 0.0), 0.0);
        // large-x gaps tend to 1/c from both sides
        let x = 60.0;
        assert!((g_plus(&d, x) - x - 0.5).abs() < 1e-12);
        assert!((x - g_minus(&d, x) - 0.5).abs() < 1e-12);
        for i in 1..=40 {
            let x = i as f64 * 0.25;
            assert!(g_plus(&d, x) >= x && x >= g_minus(&d, x));
        }
    }

    #[test]
    fn valuation_bounds_examples() {
        let degenerate = ScaleInterval::new(0.02, 0.02, 0.02, 2.0).unwrap();
        assert_eq!(
            valuation_bounds_over_interval(&degenerate).unwrap(),
            (1.0, 1.0)
        );

        let iv = ScaleInterval::new(0.02, 0.01, 0.03, 2.0).unwrap();
        let (inf, sup) = valuation_bounds_over_interval(&iv).unwrap();
        assert!((inf - (0.98f64 / 0.99).powi(2)).abs() < 1e-15);
        assert!((sup - (0.98f64 / 0.97).powi(2)).abs() < 1e-15);
        assert!(inf <= 1.0 && 1.0 <= sup);
    }

    #[test]
    fn boundary_equation_round_trips() {
        assert_eq!(solve_upper_scale(0.03, 1.0, 5.0).unwrap(), 0.03);
        let b_high = solve_upper_scale(0.02, 0.99, 1.0).unwrap();
        assert!((b_high - (1.0 - 0.99 * 0.98)).abs() < 1e-15);

        for &(b_low, ratio, c_p) in &[(0.02, 0.99, 1.0), (0.1, 0.7, 4.0), (0.5, 0.9999, 9.0)] {
            let bh = solve_upper_scale(b_low, ratio, c_p).unwrap();
            let reproduced = ((1.0 - bh) / (1.0 - b_low)).powf(c_p);
            assert!((reproduced - ratio).abs() < 1e-12);
            // one-sided residual with degenerate loss bounds
            let r = two_sided_boundary_residual((b_low, bh), (0.1, 0.1), c_p, 3.0, ratio);
            assert!(r.abs() < 1e-12);
        }

        let r = two_sided_boundary_residual((0.02, 0.02), (0.05, 0.05), 2.0, 3.0, 1.0);
        assert_eq!(r, 0.0);
    }

    #[test]
    fn solve_u_examples() {
        // gamma = 1, lambda = 1.5: u^2 = 1 - u, the golden-ratio conjugate
        let u = solve_u(1.5, 1.0).unwrap();
        assert!((u - (5.0f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);

        // u -> 0 as lambda -> 1+
        assert!(solve_u(1.0 + 1e-9, 0.75).unwrap() < 1e-8);

        // implicit-equation residual across a grid
        for &gamma in &[0.3, 0.75, 2.0] {
            for &lambda in &[1.001, 1.1, 2.0, 10.0, 49.0] {
                let u = solve_u(lambda, gamma).unwrap();
                let rhs = (lambda - 1.0) * (1.0 + gamma);
                let lhs = u / (1.0 - u).powf(gamma / (1.0 + gamma));
                assert!(
                    ((lhs - rhs) / rhs).abs() < 1e-10,
                    "lambda={lambda}, gamma={gamma}"
                );
            }
        }
    }

    #[test]
    fn conjugate_budget_curves() {
        let d = pair(0.25, 0.75);
        assert_eq!(phi_tilde_conj(0.0, &d).unwrap(), 0.0);
        // -Phi~ -> 1/c as lambda -> 1-
        let near_one = phi_tilde_conj(1.0 - 1e-12, &d).unwrap();
        assert!((near_one - 4.0).abs() < 1e-9);

        // derivative of Phi is log(u)/c
        for &lambda in &[1.05, 1.5, 3.0, 12.0] {
            let h = 1e-6 * lambda;
            let fd = (phi_conj(lambda + h, &d).unwrap() - phi_conj(lambda - h, &d).unwrap())
                / (2.0 * h);
            let analytic = solve_u(lambda, d.gamma).unwrap().ln() / d.c;
            assert!(
                ((fd - analytic) / analytic).abs() < 1e-5,
                "lambda={lambda}: fd {fd} vs {analytic}"
            );
        }

        // both budgets nonnegative on their domains
        for i in 1..200 {
            let ll = 1.0 + i as f64 * 0.2;
            assert!(phi_conj(ll, &d).unwrap() >= 0.0);
            let lu = i as f64 / 200.0;
            assert!(phi_tilde_conj(lu, &d).unwrap() >= 0.0);
        }
    }

    #[test]
    fn s_curves_limits_and_decay() {
        let iv = narrow_interval();
        let frullani = 9.0 * (0.027f64 / 0.02).ln();
        assert!((s_lambda(&iv, 1.0).unwrap() - frullani).abs() < 1e-14);
        assert!((s_lambda(&iv, 1.0 + 1e-9).unwrap() - frullani).abs() < 1e-6);

        let tilde_limit = 9.0 * (0.02f64 / 0.015).ln();
        assert!((s_tilde_lambda(&iv, 1.0).unwrap() - tilde_limit).abs() < 1e-14);
        assert!((s_tilde_lambda(&iv, 1.0 - 1e-9).unwrap() - tilde_limit).abs() < 1e-6);

        assert!(s_lambda(&iv, 1e6).unwrap() < 1e-10);
        assert!(s_tilde_lambda(&iv, 1e-6).unwrap() < 1e-10);

        // degenerate sides are identically zero
        let flat = ScaleInterval::new(0.02, 0.02, 0.02, 9.0).unwrap();
        assert_eq!(s_lambda(&flat, 2.0).unwrap(), 0.0);
        assert_eq!(s_tilde_lambda(&flat, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn condition_lower_examples() {
        let iv = narrow_interval();
        let expect = 1.0 / (9.0 * (4.0f64 / 3.0).ln());
        assert!((condition_lower_max_c(&iv).unwrap() - expect).abs() < 1e-14);

        // numeric limit oracle through the curve itself
        let via_curve = 1.0 / s_tilde_lambda(&iv, 1.0 - 1e-6).unwrap();
        assert!(((via_curve - expect) / expect).abs() < 1e-4);

        let degenerate = ScaleInterval::new(0.02, 0.02, 0.027, 9.0).unwrap();
        assert_eq!(condition_lower_max_c(&degenerate).unwrap(), f64::INFINITY);

        let violating = ScaleInterval::new(0.02, 0.005, 0.027, 9.0).unwrap();
        assert!(condition_lower_max_c(&violating).is_err());
    }

    #[test]
    fn gamma_and_c_tilde() {
        let iv = narrow_interval();
        assert!((gamma_tilde(&iv) - 0.35).abs() < 1e-12);
        let flat_top = ScaleInterval::new(0.02, 0.015, 0.02, 9.0).unwrap();
        assert_eq!(gamma_tilde(&flat_top), 0.0);

        let ct = c_tilde(&iv).unwrap();
        assert!(ct <= 1.0 / 9.0 + 1e-15);
        assert!((ct - 1.0 / 9.0).abs() < 1e-15, "gain cap binds here");
    }

    #[test]
    fn membership_reference_and_monotonicity() {
        let iv = narrow_interval();
        for &(c, gamma) in &[(0.05, 0.2), (0.5, 1.0), (3.0, 0.4)] {
            assert!(check_membership(&iv, iv.b_hat, &pair(c, gamma)).unwrap());
        }

        // violating the lower-scale condition is detected on the grid
        let too_big = 1.05 * condition_lower_max_c(&iv).unwrap();
        assert!(!check_membership(&iv, iv.b_low, &pair(too_big, 0.5)).unwrap());

        // membership is monotone in c at fixed gamma
        let gamma = gamma_tilde(&iv) + 0.2;
        let kappa = kappa_p(&iv, gamma).unwrap();
        assert!(check_membership(&iv, iv.b_high, &pair(0.5 * kappa, gamma)).unwrap());
    }

    #[test]
    fn kappa_contract_on_the_narrow_interval() {
        let iv = narrow_interval();
        let cap = c_tilde(&iv).unwrap();
        assert!(kappa_p(&iv, gamma_tilde(&iv)).is_err());

        // saturation slightly above the threshold, and monotone growth
        let mut last = 0.0;
        for i in 0..10 {
            let gamma = gamma_tilde(&iv) + 0.005 + i as f64 * 0.1;
            let k = kappa_p(&iv, gamma).unwrap();
            assert!(k > 0.0 && k <= cap + 1e-15);
            assert!(k >= last - 1e-12);
            last = k;
        }
        assert_eq!(kappa_p(&iv, gamma_tilde(&iv) + 0.005).unwrap(), cap);
    }
}
