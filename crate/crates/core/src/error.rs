//! Error type shared by all library operations.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("Fock dimensions must be at least 2 per mode, got ({0}, {1})")]
    DimsTooSmall(usize, usize),

    #[error("Fock level ({m}, {n}) outside truncation ({dim_a}, {dim_b})")]
    LevelOutOfRange {
        m: usize,
        n: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized: ||psi|| = {norm}")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian: max |rho - rho^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no closed form in this coupling regime: {0}")]
    UnsupportedRegime(String),

    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("two-qubit block has negligible weight (trace {trace:.3e})")]
    DegenerateProjection { trace: f64 },

    #[error("eigendecomposition failed to converge")]
    Eigendecomposition,

    #[error("integration failed at t = {t:.6e} s: {reason}")]
    IntegrationFailure { t: f64, reason: &'static str },

    #[error("conservation violated at t = {t:.6e} s: {what} = {value:.3e}")]
    ConservationViolation {
        what: &'static str,
        t: f64,
        value: f64,
    },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
