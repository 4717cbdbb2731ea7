//! Sharp uncertainty tradeoff curves for the number-angle conjugate pair.
//!
//! The lower boundary of the uncertainty region for a pair of translation
//! invariant metrics on the integers and on the circle is the Legendre
//! transform of the ground-state energy of
//! `H(t) = d_Z(N)^beta + t * d_T(Theta)^alpha`. This crate builds that
//! Hamiltonian in a truncated Fourier (number) basis, solves it with
//! truncation certificates, and provides independent oracles: closed forms
//! for the discrete number metric, special-function solutions for the
//! standard number metric, and variational lower bounds.
//!
//! Module map:
//!
//! - [`metrics`]: the four metrics and Fourier coefficients of `d_T^alpha`.
//! - [`dist`]: distributions on Z and on the circle, deviations, convolution
//!   and exact transport distances.
//! - [`spectral`]: the truncated Hamiltonian and its two lowest eigenpairs.
//! - [`tradeoff`]: t-sweeps, Legendre lower bounds and state-family comparisons.
//! - [`closedform`]: resolvent ground states for the discrete number metric.
//! - [`special`]: confluent hypergeometric and Mathieu oracles.
//! - [`bounds`]: the variational ground-energy lemma and named bound curves.
//! - [`covariant`]: noise margins of covariant joint measurements and the
//!   metric/calibration error estimates.
//! - [`export`]: CSV and JSON schemas shared with the command-line tool.

// `!(x >= 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod closedform;
pub mod covariant;
pub mod dist;
pub mod error;
pub mod export;
pub mod metrics;
pub mod spectral;
pub mod special;
pub mod tradeoff;

mod quadrature;

pub use dist::{CircleDist, Coupling, IntDist, Transport};
pub use error::{Error, Result};
pub use metrics::{MetricSpec, MetricT, MetricZ};
pub use spectral::{SolveOptions, SpectralResult, TruncatedHamiltonian};
pub use tradeoff::{CurvePoint, TradeoffCurve};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
