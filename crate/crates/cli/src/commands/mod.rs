pub mod bg_stats;
pub mod conic_check;
pub mod fit_bounds;
pub mod lucas;
pub mod quantize;
pub mod spectrum;
