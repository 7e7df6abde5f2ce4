//! Conic closed forms against direct quadrature of the Levy integrals, the
//! budget-curve limits, and the kappa bracket behavior on a wide interval.

use bilgamma_core::bg::{martingale_drift, sample, BgParams};
use bilgamma_core::conic::{
    check_membership, condition_lower_max_c, distorted_reward_bounds, gamma_tilde, kappa_p,
    phi_conj, s_lambda, s_tilde_lambda, solve_upper_scale, two_sided_boundary_residual, c_tilde,
    LevyDistortionPair, ScaleInterval,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Plain adaptive Simpson, independent of the crate's quadrature.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let coarse = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let fine = (b - a) / 12.0 * (f(a) + 4.0 * f(lm) + 2.0 * f(m) + 4.0 * f(rm) + f(b));
    if depth == 0 || (fine - coarse).abs() < 15.0 * tol {
        fine + (fine - coarse) / 15.0
    } else {
        simpson(f, a, m, 0.5 * tol, depth - 1) + simpson(f, m, b, 0.5 * tol, depth - 1)
    }
}

fn s_by_quadrature(b_hat: f64, b_hi: f64, c_p: f64, lambda: f64) -> f64 {
    // int over x > 0 of (dnu~/dnu - lambda)+ dnu with dnu = (c_p/x) e^{-x/b_hat}
    let level = lambda.ln() * b_hi * b_hat / (b_hi - b_hat);
    let f = |x: f64| {
        let ratio = (-x / b_hi + x / b_hat).exp();
        (ratio - lambda).max(0.0) * (c_p / x) * (-x / b_hat).exp()
    };
    simpson(&f, level.max(1e-300), 60.0 * b_hi, 1e-12, 40)
}

fn s_tilde_by_quadrature(b_hat: f64, b_lo: f64, c_p: f64, lambda: f64) -> f64 {
    let level = -lambda.ln() * b_hat * b_lo / (b_hat - b_lo);
    let f = |x: f64| {
        let ratio = (-x / b_lo + x / b_hat).exp();
        (lambda - ratio).max(0.0) * (c_p / x) * (-x / b_hat).exp()
    };
    simpson(&f, level.max(1e-300), 60.0 * b_hat, 1e-12, 40)
}

#[test]
fn closed_forms_match_levy_quadrature() {
    let mut rng = ChaCha12Rng::seed_from_u64(55);
    for _ in 0..5 {
        let b_hat = 0.01 + 0.04 * rng.random::<f64>();
        let b_hi = b_hat * (1.2 + 0.8 * rng.random::<f64>());
        let b_lo = b_hat * (0.6 + 0.35 * rng.random::<f64>());
        let c_p = 1.0 + 8.0 * rng.random::<f64>();
        let iv = ScaleInterval::new(b_hat, b_lo, b_hi, c_p).unwrap();

        for i in 0..25 {
            let lambda = 1.0 + 10f64.powf(-4.0 + 5.0 * i as f64 / 24.0);
            let closed = s_lambda(&iv, lambda).unwrap();
            let quad = s_by_quadrature(b_hat, b_hi, c_p, lambda);
            assert!(
                (closed - quad).abs() < 1e-8,
                "S({lambda}): closed {closed} vs quad {quad}"
            );
        }
        for i in 0..25 {
            let lambda = 1.0 - 10f64.powf(-4.0 + 3.9 * i as f64 / 24.0);
            let closed = s_tilde_lambda(&iv, lambda).unwrap();
            let quad = s_tilde_by_quadrature(b_hat, b_lo, c_p, lambda);
            assert!(
                (closed - quad).abs() < 1e-8,
                "S~({lambda}): closed {closed} vs quad {quad}"
            );
        }
    }
}

#[test]
fn budget_over_perturbation_limit_on_a_log_e_interval() {
    // the value-ratio limit Phi/S at lambda -> 1+ equals 1/(c c_p) exactly
    // when log(b_high / b_hat) = 1, i.e. b_high = e * b_hat
    let b_hat = 0.02;
    let iv = ScaleInterval::new(b_hat, 0.015, b_hat * std::f64::consts::E, 3.0).unwrap();
    for &c in &[0.05, 0.25, 1.0] {
        let d = LevyDistortionPair::new(c, 0.75).unwrap();
        let lambda = 1.0 + 1e-6;
        let ratio = phi_conj(lambda, &d).unwrap() / s_lambda(&iv, lambda).unwrap();
        let expect = 1.0 / (c * iv.c_p);
        assert!(
            ((ratio - expect) / expect).abs() < 1e-3,
            "c={c}: ratio {ratio} vs {expect}"
        );
    }
}

#[test]
fn budget_and_perturbation_both_vanish_at_infinity() {
    let iv = ScaleInterval::new(0.02, 0.015, 0.027, 9.0).unwrap();
    let d = LevyDistortionPair::new(0.1, 0.75).unwrap();
    let mut last_phi = f64::INFINITY;
    let mut last_s = f64::INFINITY;
    for &lambda in &[10.0, 100.0, 1000.0, 10000.0] {
        let phi = phi_conj(lambda, &d).unwrap();
        let s = s_lambda(&iv, lambda).unwrap();
        assert!(phi < last_phi && s < last_s);
        last_phi = phi;
        last_s = s;
    }
    assert!(last_phi < 1e-4 && last_s < 1e-10);
}

#[test]
fn distorted_reward_bounds_collapse_and_straddle() {
    let p = BgParams::new(0.05, 2.0, 0.06, 1.5).unwrap();
    let omega = martingale_drift(&p, 0.01).unwrap().omega;

    // wide-open distortion: both bounds collapse onto the undistorted reward
    let tight = LevyDistortionPair::new(1e8, 1e-12).unwrap();
    let (lo, hi) = distorted_reward_bounds(&p, omega, &tight).unwrap();
    let undistorted = omega + bilgamma_core::bg::log_reward_rate(&p).unwrap();
    assert!((lo - undistorted).abs() < 1e-5, "lo {lo} vs {undistorted}");
    assert!((hi - undistorted).abs() < 1e-5, "hi {hi} vs {undistorted}");

    // a real distortion brackets the undistorted reward
    let d = LevyDistortionPair::new(0.5, 0.6).unwrap();
    let (lo, hi) = distorted_reward_bounds(&p, omega, &d).unwrap();
    assert!(lo <= hi);
    assert!(lo < undistorted && undistorted < hi);

    // divergence guards
    let fat = BgParams::new(0.9, 1.0, 0.1, 1.0).unwrap();
    assert!(distorted_reward_bounds(&fat, 0.0, &LevyDistortionPair::new(1.0, 0.2).unwrap())
        .is_err());
}

#[test]
fn valuation_bounds_match_martingale_monte_carlo() {
    // sample under a shifted scale and check the discounted expectation
    let b_hat = 0.04;
    let c_p = 2.0;
    let iv = ScaleInterval::new(b_hat, 0.03, 0.05, c_p).unwrap();
    let (inf, sup) = bilgamma_core::conic::valuation_bounds_over_interval(&iv).unwrap();

    let b_n = 0.05;
    let c_n = 1.5;
    let reference = BgParams::new(b_hat, c_p, b_n, c_n).unwrap();
    let omega = martingale_drift(&reference, 0.0).unwrap().omega;
    let n = 2_000_000;
    for (b, closed) in [(iv.b_low, inf), (iv.b_high, sup)] {
        let shifted = BgParams::new(b, c_p, b_n, c_n).unwrap();
        let xs = sample(&shifted, 1.0, n, 77).unwrap();
        let vals: Vec<f64> = xs.iter().map(|x| (omega + x).exp()).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
        let se = sd / (n as f64).sqrt();
        assert!(
            (mean - closed).abs() < 3.0 * se,
            "b={b}: mc {mean} vs closed {closed} (se {se})"
        );
    }
}

#[test]
fn kappa_is_interior_with_a_tight_bracket_on_a_wide_interval() {
    // log(b_high / b_hat) > 1 puts the binding constraint at the grid and
    // below the 1/c_p cap, so the bisection output brackets membership
    let iv = ScaleInterval::new(0.02, 0.019, 0.064, 9.0).unwrap();
    let cap = c_tilde(&iv).unwrap();
    let gt = gamma_tilde(&iv);
    let mut last = 0.0;
    for i in 0..10 {
        let gamma = gt + 0.001 + 0.35 * i as f64;
        let k = kappa_p(&iv, gamma).unwrap();
        assert!(k > 0.0 && k <= cap);
        assert!(k >= last - 1e-12, "kappa not monotone at step {i}");
        last = k;
    }

    let gamma = gt + 1.0;
    let k = kappa_p(&iv, gamma).unwrap();
    assert!(k < cap, "expected an interior kappa, got the cap {cap}");
    let eps = 1e-3 * k;
    let inside = LevyDistortionPair::new(k - eps, gamma).unwrap();
    let outside = LevyDistortionPair::new(k + eps, gamma).unwrap();
    assert!(check_membership(&iv, iv.b_high, &inside).unwrap());
    assert!(!check_membership(&iv, iv.b_high, &outside).unwrap());
}

#[test]
fn solve_and_valuation_are_mutually_consistent() {
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    for _ in 0..20 {
        let b_hat = 0.01 + 0.2 * rng.random::<f64>();
        let ratio = 0.9 + 0.1 * rng.random::<f64>();
        let c_p = 0.5 + 6.0 * rng.random::<f64>();
        let b_high = solve_upper_scale(b_hat, ratio, c_p).unwrap();
        let iv = ScaleInterval::new(b_hat, b_hat, b_high, c_p).unwrap();
        let (_, sup) = bilgamma_core::conic::valuation_bounds_over_interval(&iv).unwrap();
        // sup = ((1-b_hat)/(1-b_high))^c_p = 1/ratio at the solved boundary
        assert!((sup * ratio - 1.0).abs() < 1e-12);
        let residual =
            two_sided_boundary_residual((b_hat, b_high), (0.2, 0.2), c_p, 1.0, ratio);
        assert!(residual.abs() < 1e-12);
    }
}

#[test]
fn lower_condition_limit_against_the_curve() {
    let iv = ScaleInterval::new(0.03, 0.022, 0.04, 4.0).unwrap();
    let limit = condition_lower_max_c(&iv).unwrap();
    let via_curve = 1.0 / s_tilde_lambda(&iv, 1.0 - 1e-6).unwrap();
    assert!(((via_curve - limit) / limit).abs() < 1e-4);
}
