//! Shared numerical kernels: adaptive quadrature, the exponential integral,
//! root bracketing, and small dense optimizers.

pub mod expint;
pub mod gamma;
pub mod optim;
pub mod quad;
pub mod root;

pub use expint::expint_e1;
pub use gamma::{gamma_p, gamma_quantile, ln_gamma};
pub use quad::{integrate, integrate_half_line};
pub use root::bisect;
