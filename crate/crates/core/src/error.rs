//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("unphysical state: min eigenvalue {min_eigenvalue:.3e}")]
    UnphysicalState { min_eigenvalue: f64 },

    #[error("state trace is {trace} (expected 1 within {tol:.1e})")]
    TraceNotOne { trace: f64, tol: f64 },

    #[error("positivity violation at t = {t}: min eigenvalue {min_eigenvalue:.3e} exceeds tolerance {tol:.1e}")]
    PositivityViolation {
        t: f64,
        min_eigenvalue: f64,
        tol: f64,
    },

    #[error("trace drift at t = {t}: |Tr rho - 1| = {drift:.3e}")]
    TraceDrift { t: f64, drift: f64 },

    #[error("invalid model parameters: {reason}")]
    InvalidModel { reason: String },

    #[error("closed-form propagator requires epsilon = 0; use propagator_expm instead")]
    ClosedFormNeedsZeroEpsilon,

    #[error("J = {j} is outside the {regime} coupling regime for delta = {delta}")]
    RegimeMismatch {
        regime: &'static str,
        j: f64,
        delta: f64,
    },

    #[error("invalid bath parameters: {reason}")]
    InvalidBath { reason: String },

    #[error("spectral density requires omega >= 0 (got {omega})")]
    NegativeFrequency { omega: f64 },

    #[error(
        "bose occupation requires beta > 0 and omega > 0 (got beta = {beta}, omega = {omega})"
    )]
    OccupationDomain { beta: f64, omega: f64 },

    #[error("trigamma requires Re z > 0 (got Re z = {re})")]
    TrigammaDomain { re: f64 },

    #[error("kernel quadrature did not converge (requested {tol:.1e}, reached {reached:.1e})")]
    QuadratureNoConvergence { tol: f64, reached: f64 },

    #[error("invalid integrator config: {reason}")]
    InvalidConfig { reason: String },

    #[error("measurement optimizer stalled (simplex spread {spread:.3e} above tolerance)")]
    OptimizerStall { spread: f64 },

    #[error("measure evaluation failed at t = {t}: {source}")]
    MeasureFailure { t: f64, source: Box<Error> },

    #[error("temperature must be positive (got {kelvin} K)")]
    NonPositiveTemperature { kelvin: f64 },

    #[error("unknown preset '{name}'; run list-presets for the available names")]
    UnknownPreset { name: String },

    #[error("invalid scenario config: {reason}")]
    InvalidScenario { reason: String },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
