//! Bilateral gamma distribution primitives.
//!
//! A bilateral gamma variate is the difference of two independent gamma
//! variates: gains with scale `b_p` and speed `c_p`, losses with scale `b_n`
//! and speed `c_n`. The module covers the parameter/moment maps, the
//! characteristic function, the Levy density, seeded sampling, CDF evaluation
//! by characteristic-function inversion, exponential moments and the
//! martingale drift.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::num::{bisect, integrate};

/// Scale/speed quadruple `(b_p, c_p, b_n, c_n)` of a bilateral gamma law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BgParams {
    /// Scale of the gain jumps.
    pub b_p: f64,
    /// Speed (shape per unit time) of the gain jumps.
    pub c_p: f64,
    /// Scale of the loss jumps.
    pub b_n: f64,
    /// Speed of the loss jumps.
    pub c_n: f64,
}

impl BgParams {
    pub fn new(b_p: f64, c_p: f64, b_n: f64, c_n: f64) -> Result<Self> {
        let p = Self { b_p, c_p, b_n, c_n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("b_p", self.b_p),
            ("c_p", self.c_p),
            ("b_n", self.b_n),
            ("c_n", self.c_n),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Means and standard deviations of the gain and loss legs per unit time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainLossMoments {
    pub mu_p: f64,
    pub sigma_p: f64,
    pub mu_n: f64,
    pub sigma_n: f64,
}

impl GainLossMoments {
    pub fn new(mu_p: f64, sigma_p: f64, mu_n: f64, sigma_n: f64) -> Result<Self> {
        let m = Self {
            mu_p,
            sigma_p,
            mu_n,
            sigma_n,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mu_p", self.mu_p),
            ("sigma_p", self.sigma_p),
            ("mu_n", self.mu_n),
            ("sigma_n", self.sigma_n),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Drift making the discounted exponential process a martingale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MartingaleDrift {
    /// Drift per unit time.
    pub omega: f64,
    /// Risk-free rate per unit time.
    pub r: f64,
}

/// Moment map: `mu = c * b`, `sigma = sqrt(c) * b` on each leg.
pub fn moments_from_params(p: &BgParams) -> Result<GainLossMoments> {
    p.validate()?;
    Ok(GainLossMoments {
        mu_p: p.c_p * p.b_p,
        sigma_p: p.c_p.sqrt() * p.b_p,
        mu_n: p.c_n * p.b_n,
        sigma_n: p.c_n.sqrt() * p.b_n,
    })
}

/// Inverse moment map: `c = (mu/sigma)^2`, `b = sigma^2 / mu` on each leg.
pub fn params_from_moments(m: &GainLossMoments) -> Result<BgParams> {
    m.validate()?;
    Ok(BgParams {
        b_p: m.sigma_p * m.sigma_p / m.mu_p,
        c_p: (m.mu_p / m.sigma_p).powi(2),
        b_n: m.sigma_n * m.sigma_n / m.mu_n,
        c_n: (m.mu_n / m.sigma_n).powi(2),
    })
}

/// Characteristic function of the increment over `t` units of time:
/// `(1 - i u b_p)^(-t c_p) (1 + i u b_n)^(-t c_n)` on principal branches.
pub fn char_function(p: &BgParams, t: f64, u: f64) -> Result<Complex64> {
    p.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let gain = Complex64::new(1.0, -u * p.b_p).powf(-t * p.c_p);
    let loss = Complex64::new(1.0, u * p.b_n).powf(-t * p.c_n);
    Ok(gain * loss)
}

/// Levy density `k(x)`: `(c_p/x) e^{-x/b_p}` for `x > 0` and
/// `(c_n/|x|) e^{-|x|/b_n}` for `x < 0`. Singular at the origin.
pub fn levy_density(p: &BgParams, x: f64) -> Result<f64> {
    p.validate()?;
    if x == 0.0 {
        return Err(Error::Domain(
            "the Levy density is singular at x = 0".into(),
        ));
    }
    Ok(if x > 0.0 {
        (p.c_p / x) * (-x / p.b_p).exp()
    } else {
        (p.c_n / -x) * (x / p.b_n).exp()
    })
}

/// Draws `n` i.i.d. increments of the process at horizon `t`.
///
/// Seeding contract: one seed yields one reproducible stream, and for every
/// draw the gain variate is consumed from the stream before the loss variate.
/// Splitting work across threads requires explicitly derived sub-seeds.
pub fn sample(p: &BgParams, t: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    p.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let gains = Gamma::new(t * p.c_p, p.b_p)
        .map_err(|e| Error::InvalidParameter(format!("gain gamma: {e}")))?;
    let losses = Gamma::new(t * p.c_n, p.b_n)
        .map_err(|e| Error::InvalidParameter(format!("loss gamma: {e}")))?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let g = gains.sample(&mut rng);
            let l = losses.sample(&mut rng);
            g - l
        })
        .collect())
}

/// `P(X_t <= x)` by inversion of the characteristic function,
/// `F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-iux} phi_t(u)) / u du`,
/// with the integrand truncated where `|phi_t| < 1e-12` and the quadrature
/// run at absolute tolerance 1e-8.
pub fn cdf(p: &BgParams, t: f64, x: f64) -> Result<f64> {
    p.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }

    // deep-tail shortcut: exponential moment bounds at s = 1/(2b) settle the
    // value to within 1e-10 and avoid a hopelessly oscillatory inversion
    let log_tail_cut = (1e-10f64).ln();
    let upper_tail = t * p.c_p * 2.0f64.ln() - t * p.c_n * (1.0 + 0.5 * p.b_n / p.b_p).ln()
        - 0.5 * x / p.b_p;
    if x > 0.0 && upper_tail < log_tail_cut {
        return Ok(1.0);
    }
    let lower_tail = t * p.c_n * 2.0f64.ln() - t * p.c_p * (1.0 + 0.5 * p.b_p / p.b_n).ln()
        - 0.5 * (-x) / p.b_n;
    if x < 0.0 && lower_tail < log_tail_cut {
        return Ok(0.0);
    }

    let log_modulus = |u: f64| {
        -0.5 * t * p.c_p * (1.0 + (u * p.b_p).powi(2)).ln()
            - 0.5 * t * p.c_n * (1.0 + (u * p.b_n).powi(2)).ln()
    };
    let cut = (1e-12f64).ln();
    let mut hi = 1.0 / p.b_p.min(p.b_n);
    let mut guard = 0;
    while log_modulus(hi) > cut {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::QuadratureNonConvergence {
                requested: 1e-8,
                achieved: f64::INFINITY,
            });
        }
    }
    let u_max = bisect(|u| log_modulus(u) - cut, hi / 2.0, hi, 1e-6 * hi)
        .unwrap_or(hi);

    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let gain = Complex64::new(1.0, -u * p.b_p).powf(-t * p.c_p);
        let loss = Complex64::new(1.0, u * p.b_n).powf(-t * p.c_n);
        let rotated = Complex64::from_polar(1.0, -u * x) * gain * loss;
        rotated.im / u
    };
    let integral = integrate(integrand, 0.0, u_max, 1e-8)?;
    Ok((0.5 - integral / std::f64::consts::PI).clamp(0.0, 1.0))
}

/// `E[e^{X_t}] = (1 - b_p)^{-t c_p} (1 + b_n)^{-t c_n}`, defined for
/// `b_p < 1`. The short-horizon expected-return *rate*
/// `lim_{T -> 0} mu(T)/T` with `S_0 e^{mu(T)} = E[S_0 e^{X_T}]` is the
/// logarithm of this quantity at `t = 1`; see [`log_reward_rate`].
pub fn expected_exp(p: &BgParams, t: f64) -> Result<f64> {
    p.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    if p.b_p >= 1.0 - 1e-12 {
        return Err(Error::Divergent(format!(
            "E[exp(X_t)] diverges as b_p -> 1 (b_p = {})",
            p.b_p
        )));
    }
    Ok((1.0 - p.b_p).powf(-t * p.c_p) * (1.0 + p.b_n).powf(-t * p.c_n))
}

/// Per-unit-time growth rate of `E[S_0 e^{X_t}]`:
/// `-c_p log(1 - b_p) - c_n log(1 + b_n)`, equal to
/// `log(expected_exp(p, 1))` and to `int (e^x - 1) k(x) dx`.
pub fn log_reward_rate(p: &BgParams) -> Result<f64> {
    p.validate()?;
    if p.b_p >= 1.0 - 1e-12 {
        return Err(Error::Divergent(format!(
            "the reward rate diverges as b_p -> 1 (b_p = {})",
            p.b_p
        )));
    }
    Ok(-p.c_p * (1.0 - p.b_p).ln() - p.c_n * (1.0 + p.b_n).ln())
}

/// Drift `omega = r + log((1 - b_p)^{c_p} (1 + b_n)^{c_n})`, chosen so that
/// `E[e^{omega + X_1}] = e^r`.
pub fn martingale_drift(p: &BgParams, r: f64) -> Result<MartingaleDrift> {
    p.validate()?;
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r must be finite, got {r}")));
    }
    if p.b_p >= 1.0 - 1e-12 {
        return Err(Error::Divergent(format!(
            "the martingale drift is undefined for b_p >= 1 (b_p = {})",
            p.b_p
        )));
    }
    Ok(MartingaleDrift {
        omega: r + p.c_p * (1.0 - p.b_p).ln() + p.c_n * (1.0 + p.b_n).ln(),
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symmetric(b: f64, c: f64) -> BgParams {
        BgParams::new(b, c, b, c).unwrap()
    }

    #[test]
    fn moment_map_matches_closed_form() {
        let p = BgParams::new(1.0 / 300.0, 9.0, 1.0 / 300.0, 9.0).unwrap();
        let m = moments_from_params(&p).unwrap();
        assert!((m.mu_p - 0.03).abs() < 1e-15);
        assert!((m.sigma_p - 0.01).abs() < 1e-15);
        assert!((m.mu_n - 0.03).abs() < 1e-15);
        assert!((m.sigma_n - 0.01).abs() < 1e-15);

        let unit = BgParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let mu = moments_from_params(&unit).unwrap();
        assert_eq!(mu, GainLossMoments::new(1.0, 1.0, 1.0, 1.0).unwrap());
    }

    #[test]
    fn inverse_moment_map_examples() {
        let m = GainLossMoments::new(0.03, 0.01, 0.03, 0.01).unwrap();
        let p = params_from_moments(&m).unwrap();
        assert!((p.b_p - 1.0 / 300.0).abs() < 1e-15);
        assert!((p.c_p - 9.0).abs() < 1e-12);

        let gain_side = GainLossMoments::new(2.0, 1.0, 2.0, 1.0).unwrap();
        let q = params_from_moments(&gain_side).unwrap();
        assert!((q.b_p - 0.5).abs() < 1e-15);
        assert!((q.c_p - 4.0).abs() < 1e-15);

        assert!(params_from_moments(&GainLossMoments {
            mu_p: -1.0,
            sigma_p: 1.0,
            mu_n: 1.0,
            sigma_n: 1.0
        })
        .is_err());
    }

    #[test]
    fn char_function_basics() {
        let p = BgParams::new(0.1, 2.0, 0.2, 1.5).unwrap();
        let at_zero = char_function(&p, 1.0, 0.0).unwrap();
        assert!((at_zero.re - 1.0).abs() < 1e-15 && at_zero.im.abs() < 1e-15);

        // symmetric parameters give a purely real value (1 + u^2 b^2)^(-t c)
        let s = symmetric(0.05, 3.0);
        for &u in &[-7.0, -1.0, 0.5, 4.0] {
            let v = char_function(&s, 2.0, u).unwrap();
            let expect = (1.0 + u * u * 0.05 * 0.05).powf(-2.0 * 3.0);
            assert!(v.im.abs() < 1e-14);
            assert!((v.re - expect).abs() < 1e-14);
        }

        // |phi| <= 1 on a grid
        for i in 0..=100 {
            let u = -50.0 + i as f64;
            assert!(char_function(&p, 0.7, u).unwrap().norm() <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn levy_density_examples() {
        let unit = BgParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((levy_density(&unit, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(levy_density(&unit, 0.0).is_err());

        let s = symmetric(0.3, 2.0);
        for &x in &[0.05, 0.7, 2.0] {
            assert!(
                (levy_density(&s, x).unwrap() - levy_density(&s, -x).unwrap()).abs() < 1e-15
            );
        }

        // int min(1, x) k(x) dx over (0, inf) is finite even though k blows up at 0
        let p = BgParams::new(0.2, 1.5, 0.2, 1.5).unwrap();
        let v = integrate(
            |x| x.min(1.0) * levy_density(&p, x).unwrap(),
            1e-12,
            20.0,
            1e-9,
        )
        .unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn sampling_is_deterministic_and_centered() {
        let s = symmetric(0.02, 4.0);
        let a = sample(&s, 1.0, 10_000, 99).unwrap();
        let b = sample(&s, 1.0, 10_000, 99).unwrap();
        assert_eq!(a, b);

        let p = BgParams::new(0.03, 5.0, 0.01, 2.0).unwrap();
        let n = 1_000_000;
        let xs = sample(&p, 2.0, n, 7).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let expect = 2.0 * (5.0 * 0.03 - 2.0 * 0.01);
        let var = 2.0 * (5.0 * 0.03 * 0.03 + 2.0 * 0.01 * 0.01);
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "mean {mean} vs {expect} (se {se})"
        );

        let sym = sample(&s, 1.0, n, 11).unwrap();
        let sym_mean = sym.iter().sum::<f64>() / n as f64;
        let sym_se = (2.0 * 4.0 * 0.02 * 0.02 / n as f64).sqrt();
        assert!(sym_mean.abs() < 4.0 * sym_se);
    }

    #[test]
    fn cdf_symmetry_and_limits() {
        let s = symmetric(0.1, 2.0);
        assert!((cdf(&s, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-7);
        assert!((cdf(&s, 1.0, 1000.0).unwrap() - 1.0).abs() < 1e-6);
        assert!(cdf(&s, 1.0, -1000.0).unwrap() < 1e-6);

        // monotone nondecreasing on a grid
        let p = BgParams::new(0.05, 3.0, 0.08, 1.0).unwrap();
        let mut last = -1.0;
        for i in 0..=40 {
            let x = -1.0 + 2.0 * i as f64 / 40.0;
            let v = cdf(&p, 1.0, x).unwrap();
            assert!(v >= last - 1e-8);
            last = v;
        }
    }

    #[test]
    fn expected_exp_examples() {
        let p = BgParams::new(0.5, 1.0, 0.5, 1.0).unwrap();
        assert!((expected_exp(&p, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);

        let diverging = BgParams {
            b_p: 1.0,
            c_p: 1.0,
            b_n: 0.5,
            c_n: 1.0,
        };
        assert!(expected_exp(&diverging, 1.0).is_err());
        let near = BgParams {
            b_p: 1.0 - 1e-13,
            c_p: 1.0,
            b_n: 0.5,
            c_n: 1.0,
        };
        assert!(expected_exp(&near, 1.0).is_err());

        // Monte Carlo cross-check at a moderate parameter point
        let q = BgParams::new(0.2, 1.5, 0.3, 2.0).unwrap();
        let n = 1_000_000;
        let xs = sample(&q, 1.0, n, 17).unwrap();
        let vals: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
        let se = sd / (n as f64).sqrt();
        let closed = expected_exp(&q, 1.0).unwrap();
        assert!(
            (mean - closed).abs() < 3.0 * se,
            "mc {mean} vs closed {closed} (se {se})"
        );
    }

    #[test]
    fn martingale_drift_identities() {
        let p = BgParams::new(0.04, 2.0, 0.03, 5.0).unwrap();
        let d = martingale_drift(&p, 0.01).unwrap();
        let identity = (d.omega - d.r).exp() * expected_exp(&p, 1.0).unwrap();
        assert!((identity - 1.0).abs() < 1e-12);

        // symmetric small-b closed form: omega - r = c log(1 - b^2)
        let s = symmetric(0.1, 3.0);
        let ds = martingale_drift(&s, 0.0).unwrap();
        assert!((ds.omega - 3.0 * (1.0 - 0.01f64).ln()).abs() < 1e-14);

        // degenerate loss leg as the limit b_n -> 0
        let thin = BgParams::new(0.5, 1.0, 1e-14, 3.0).unwrap();
        let dt = martingale_drift(&thin, 0.02).unwrap();
        assert!((dt.omega - dt.r - 0.5f64.ln()).abs() < 1e-12);

        assert!(martingale_drift(
            &BgParams {
                b_p: 1.0,
                c_p: 1.0,
                b_n: 0.1,
                c_n: 1.0
            },
            0.0
        )
        .is_err());
    }
}
