//! Dominance verdicts cross-checked against the integrated-CDF oracle, with
//! gamma CDFs supplied by an independent special-function implementation.

use bilgamma_core::bg::{cdf, params_from_moments, GainLossMoments};
use bilgamma_core::dominance::{
    bg_ssd_sufficient, gamma_ssd, ssd_numeric, support_grid, GammaLaw,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ContinuousCDF, Gamma};

fn gamma_cdf(law: &GammaLaw) -> impl Fn(f64) -> f64 {
    let dist = Gamma::new(law.shape, 1.0 / law.scale).unwrap();
    move |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            dist.cdf(x)
        }
    }
}

fn numeric_dominates(x: &GammaLaw, y: &GammaLaw) -> bool {
    let f = gamma_cdf(x);
    let g = gamma_cdf(y);
    let grid = support_grid(&f, &g, 4096).unwrap();
    ssd_numeric(&f, &g, &grid).unwrap()
}

#[test]
fn shape_two_dominates_shape_one_at_equal_scale() {
    let x = GammaLaw::new(1.0, 2.0).unwrap();
    let y = GammaLaw::new(1.0, 1.0).unwrap();
    assert!(gamma_ssd(&x, &y));
    assert!(numeric_dominates(&x, &y));
    assert!(!numeric_dominates(&y, &x));
}

#[test]
fn closed_form_verdicts_confirmed_by_the_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let mut confirmed = 0;
    for _ in 0..50 {
        let x = GammaLaw::new(
            0.3 + 1.5 * rng.random::<f64>(),
            0.4 + 2.5 * rng.random::<f64>(),
        )
        .unwrap();
        let y = GammaLaw::new(
            0.3 + 1.5 * rng.random::<f64>(),
            0.4 + 2.5 * rng.random::<f64>(),
        )
        .unwrap();
        if gamma_ssd(&x, &y) {
            assert!(
                numeric_dominates(&x, &y),
                "closed form claims ({}, {}) >= ({}, {}) but the oracle disagrees",
                x.scale,
                x.shape,
                y.scale,
                y.shape
            );
            confirmed += 1;
        }
    }
    assert!(confirmed >= 5, "only {confirmed} positive verdicts sampled");
}

#[test]
fn mean_up_variance_down_implies_dominance() {
    // the sufficient moment condition, checked by the oracle
    let mut rng = ChaCha12Rng::seed_from_u64(17);
    for trial in 0..100 {
        let x = GammaLaw::new(
            0.3 + 1.5 * rng.random::<f64>(),
            0.4 + 2.5 * rng.random::<f64>(),
        )
        .unwrap();
        // worsen the mean down and the variance up, at least one strictly
        let mean_cut = 1.0 - 0.3 * rng.random::<f64>();
        let var_grow = 1.0 + 0.5 * rng.random::<f64>();
        let mean_y = x.mean() * mean_cut;
        let var_y = x.variance() * var_grow;
        let y = GammaLaw::new(var_y / mean_y, mean_y * mean_y / var_y).unwrap();
        assert!(
            numeric_dominates(&x, &y),
            "trial {trial}: ({}, {}) should dominate ({}, {})",
            x.scale,
            x.shape,
            y.scale,
            y.shape
        );
    }
}

#[test]
fn transitivity_spot_check() {
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    let mut found = 0;
    while found < 10 {
        let z = GammaLaw::new(
            0.4 + rng.random::<f64>(),
            0.5 + 2.0 * rng.random::<f64>(),
        )
        .unwrap();
        let y = GammaLaw::new(z.scale * (1.0 + 0.2 * rng.random::<f64>()), z.shape).unwrap();
        let x = GammaLaw::new(y.scale, y.shape * (1.0 + 0.2 * rng.random::<f64>())).unwrap();
        if gamma_ssd(&x, &y) && gamma_ssd(&y, &z) {
            assert!(numeric_dominates(&x, &z));
            found += 1;
        }
    }
}

#[test]
fn dominance_implies_mean_ordering() {
    let mut rng = ChaCha12Rng::seed_from_u64(29);
    for _ in 0..200 {
        let x = GammaLaw::new(
            0.2 + 2.0 * rng.random::<f64>(),
            0.2 + 3.0 * rng.random::<f64>(),
        )
        .unwrap();
        let y = GammaLaw::new(
            0.2 + 2.0 * rng.random::<f64>(),
            0.2 + 3.0 * rng.random::<f64>(),
        )
        .unwrap();
        if gamma_ssd(&x, &y) {
            assert!(x.mean() >= y.mean() - 1e-12);
        }
    }
}

#[test]
fn bilateral_sufficient_condition_confirmed_on_convolved_cdfs() {
    // one strict improvement in expected gains; oracle on the full laws
    let x = GainLossMoments::new(0.04, 0.01, 0.03, 0.01).unwrap();
    let y = GainLossMoments::new(0.03, 0.01, 0.03, 0.01).unwrap();
    assert!(bg_ssd_sufficient(&x, &y));

    let px = params_from_moments(&x).unwrap();
    let py = params_from_moments(&y).unwrap();
    let f = move |v: f64| cdf(&px, 1.0, v).unwrap();
    let g = move |v: f64| cdf(&py, 1.0, v).unwrap();
    let grid = support_grid(&f, &g, 512).unwrap();
    assert!(ssd_numeric(&f, &g, &grid).unwrap());
    assert!(!ssd_numeric(&g, &f, &grid).unwrap());
}
