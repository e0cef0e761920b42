//! Tail goodness-of-fit testing with the Hill-like statistic
//!
//! ```text
//! R = ln(1 - F0(X_(n-k))) - (1/k) * sum_{i > n-k} ln(1 - F0(X_(i)))
//! ```
//!
//! computed from the k largest order statistics of a sample. Under the null
//! hypothesis F = F0 (continuous), k*R follows a Gamma(k, 1) law exactly, so
//! the test has an exact p-value at every k as well as the normal limit of
//! sqrt(k)(R - 1).
//!
//! Besides the test itself the crate provides numerical checks of the
//! tail-ordering conditions under which the test is consistent
//! ([`conditions`]) and a deterministic parallel Monte Carlo engine
//! ([`simulation`]) for calibration and power studies.

pub mod conditions;
pub mod data;
pub mod distributions;
pub mod error;
pub mod ks;
pub mod simulation;
pub mod special;
pub mod tail_statistic;

pub use distributions::{Distribution, EndpointTransform, EndpointView, Family, Sampler, TailModel};
pub use error::{Error, Result};
pub use tail_statistic::{
    hill_estimator, p_values, r_statistic, select_top_k, select_top_k_owned, tail_test, z_statistic,
    PValues, Sided, TailSlice, TestReport,
};
