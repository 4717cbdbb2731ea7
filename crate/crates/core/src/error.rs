use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("quadrature did not converge for coefficient {index} (discrepancy {discrepancy:e})")]
    QuadratureNotConverged { index: usize, discrepancy: f64 },

    #[error("grid mismatch: {left} vs {right} atoms")]
    GridMismatch { left: usize, right: usize },

    #[error("transport problem infeasible: {0}")]
    Infeasible(String),

    #[error("iteration did not converge: {0}")]
    NotConverged(String),

    #[error("spectral gap {gap:e} below threshold, ground state is near-degenerate")]
    NearDegenerate { gap: f64 },

    #[error("truncation not adequate at t = {t}: n_max = {n_max} reached the cap with tail {tail:e}")]
    TruncationCapExceeded { t: f64, n_max: usize, tail: f64 },

    #[error("no sign change of the residual in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("i/o: {0}")]
    Io(String),

    #[error("hypergeometric series did not converge for a = {a}, b = {b}, z = {z}")]
    SeriesNotConverged { a: f64, b: f64, z: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
