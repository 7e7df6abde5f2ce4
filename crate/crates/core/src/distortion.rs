//! MINMAXVAR probability distortions, distorted expectations from ordered
//! samples, Choquet integrals from tail callables, the Sharpe ratio and the
//! acceptability index.

use crate::bg::GainLossMoments;
use crate::error::{Error, Result};

/// Search cap for [`acceptability_index`]; far above stress levels seen in
/// equity return data.
pub const ACCEPTABILITY_CAP: f64 = 10.0;

/// Trading days per year used by the default Sharpe-ratio horizon.
pub const DEFAULT_TRADING_DAYS: f64 = 250.0;

/// The MINMAXVAR distortion
/// `Psi(u) = 1 - (1 - u^{1/(1+gamma)})^{1+gamma}` at stress level `gamma`.
/// Concave and nondecreasing on `[0, 1]`, the identity at `gamma = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMaxVar {
    pub gamma: f64,
}

impl MinMaxVar {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "distortion stress must be nonnegative, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    /// `Psi(u)` for `u` in `[0, 1]`.
    pub fn psi(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("psi argument must be in [0,1], got {u}")));
        }
        if self.gamma == 0.0 {
            return Ok(u);
        }
        let e = 1.0 + self.gamma;
        Ok(1.0 - (1.0 - u.powf(1.0 / e)).powf(e))
    }

    /// Dual distortion `1 - Psi(1 - u)`; convex, used on the gain leg of the
    /// lower Choquet valuation.
    pub fn psi_dual(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "psi_dual argument must be in [0,1], got {u}"
            )));
        }
        Ok(1.0 - self.psi(1.0 - u)?)
    }
}

/// Which of the two conjugate valuations to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Conservative valuation; the concave distortion weights low outcomes up.
    Lower,
    /// Optimistic valuation via the convex dual.
    Upper,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            other => Err(Error::InvalidParameter(format!(
                "side must be 'lower' or 'upper', got '{other}'"
            ))),
        }
    }
}

/// Rank weights of the ordered-sample distorted-expectation estimator:
/// `w_i = Psi(i/n) - Psi((i-1)/n)` for the lower side, with the dual
/// distortion on the upper side. Nonnegative and summing to one.
pub fn rank_weights(n: usize, d: &MinMaxVar, side: Side) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one sample point".into()));
    }
    let apply = |u: f64| match side {
        Side::Lower => d.psi(u),
        Side::Upper => d.psi_dual(u),
    };
    let mut weights = Vec::with_capacity(n);
    let mut prev = 0.0;
    for i in 1..=n {
        let cur = apply(i as f64 / n as f64)?;
        weights.push((cur - prev).max(0.0));
        prev = cur;
    }
    Ok(weights)
}

/// Distorted expectation of a sample: order the observations, weight the
/// `i`-th order statistic by `Psi(i/n) - Psi((i-1)/n)` (dual on the upper
/// side) and sum.
pub fn distorted_expectation(sample: &[f64], d: &MinMaxVar, side: Side) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidParameter("sample must be nonempty".into()));
    }
    let mut ordered = sample.to_vec();
    ordered.sort_by(f64::total_cmp);
    let weights = rank_weights(ordered.len(), d, side)?;
    Ok(ordered.iter().zip(&weights).map(|(x, w)| x * w).sum())
}

/// Lower Choquet valuation from tail callables: the convex dual distorts the
/// gain tail `a -> P(X+ >= a)` and the concave distortion the loss tail
/// `a -> P(X- >= a)`,
/// `int_0^inf dual(tail_pos) da - int_0^inf Psi(tail_neg) da`,
/// each integral by adaptive quadrature over the half line.
pub fn choquet_integral<P, N>(tail_pos: P, tail_neg: N, d: &MinMaxVar) -> Result<f64>
where
    P: Fn(f64) -> f64,
    N: Fn(f64) -> f64,
{
    let dcopy = *d;
    let gains = crate::num::integrate_half_line(
        move |a| dcopy.psi_dual(tail_pos(a).clamp(0.0, 1.0)).unwrap_or(0.0),
        0.0,
        1e-9,
    )?;
    let losses = crate::num::integrate_half_line(
        move |a| dcopy.psi(tail_neg(a).clamp(0.0, 1.0)).unwrap_or(0.0),
        0.0,
        1e-9,
    )?;
    Ok(gains - losses)
}

/// Annualized Sharpe ratio from gain/loss moments:
/// `(mu_p - mu_n) sqrt(days) / sqrt(sigma_p^2 + sigma_n^2)`.
pub fn sharpe_ratio(m: &GainLossMoments, days: f64) -> Result<f64> {
    if !(days > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be positive, got {days}"
        )));
    }
    let var = m.sigma_p * m.sigma_p + m.sigma_n * m.sigma_n;
    if var <= 0.0 {
        return Err(Error::Domain(
            "Sharpe ratio undefined with zero gain and loss variance".into(),
        ));
    }
    Ok((m.mu_p - m.mu_n) * days.sqrt() / var.sqrt())
}

/// Position direction for the acceptability index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Long,
    Short,
}

/// Largest stress `gamma` in `[0, 10]` at which the lower distorted
/// expectation of the position remains nonnegative, found by bisection to
/// 1e-6. Returns 0 when the plain mean is already negative and the cap when
/// every stress level is acceptable.
pub fn acceptability_index(sample: &[f64], position: Position) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidParameter("sample must be nonempty".into()));
    }
    let mut ordered: Vec<f64> = match position {
        Position::Long => sample.to_vec(),
        Position::Short => sample.iter().map(|x| -x).collect(),
    };
    ordered.sort_by(f64::total_cmp);

    let lower_at = |gamma: f64| -> Result<f64> {
        let d = MinMaxVar::new(gamma)?;
        let weights = rank_weights(ordered.len(), &d, Side::Lower)?;
        Ok(ordered.iter().zip(&weights).map(|(x, w)| x * w).sum())
    };

    if lower_at(0.0)? < 0.0 {
        return Ok(0.0);
    }
    if lower_at(ACCEPTABILITY_CAP)? >= 0.0 {
        return Ok(ACCEPTABILITY_CAP);
    }
    let mut lo = 0.0;
    let mut hi = ACCEPTABILITY_CAP;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if lower_at(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
