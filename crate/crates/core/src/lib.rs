//! Analytics for bilateral gamma return models.
//!
//! The crate is organized around the pipeline it supports:
//!
//! * [`bg`] — distribution primitives: parameter/moment maps, the
//!   characteristic function and its CDF inversion, the Levy density, seeded
//!   sampling, exponential moments and the martingale drift;
//! * [`dominance`] — closed-form and numeric second-order stochastic
//!   dominance tests for gamma and bilateral gamma laws;
//! * [`distortion`] — MINMAXVAR distortions, distorted expectations, Choquet
//!   valuations, the Sharpe ratio and the acceptability index;
//! * [`regression`] — quantile, distorted and Gaussian-process boundary
//!   regression with analytic gradients;
//! * [`manifold`] — k-means quantization and PCA / diffusion-map spectra;
//! * [`lucas`] — a two-period equilibrium-rate Monte Carlo with
//!   common-random-number parameter sweeps;
//! * [`conic`] — acceptance bounds for risk-neutral scale parameters:
//!   distorted reward bounds, boundary equations, conjugate budget curves
//!   and the maximal frequency stress.
//!
//! Everything is deterministic given explicit seeds; no global RNG state.

pub mod bg;
pub mod conic;
pub mod distortion;
pub mod dominance;
pub mod error;
pub mod lucas;
pub mod manifold;
pub mod num;
pub mod regression;

pub use bg::{BgParams, GainLossMoments, MartingaleDrift};
pub use conic::{LevyDistortionPair, ScaleInterval};
pub use distortion::{MinMaxVar, Position, Side};
pub use dominance::GammaLaw;
pub use error::{Error, Result};
pub use lucas::{EquilibriumRate, LucasConfig, SlopeEstimate, SweepParameter, SweepPoint};
pub use manifold::{Bandwidth, QuantizedSet, SpectrumReport};
pub use regression::{Dataset, GprBoundary, LinearBoundary, QuantileLevel};
