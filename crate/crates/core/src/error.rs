use thiserror::Error;

/// Errors raised by the spectral core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("spectrum is not conjugate symmetric (imaginary residue {residue:.3e} of field norm)")]
    NotConjugateSymmetric { residue: f64 },

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("{n} is not a dyadic block index (expected 0 or a power of two)")]
    NonDyadicBlock { n: u64 },

    #[error("unstable stratification: rho = {rho} must exceed rho1 = {rho1} > 0")]
    UnstableConfiguration { rho: f64, rho1: f64 },

    #[error("invalid physical parameter: {0}")]
    InvalidPhysicalParams(&'static str),

    #[error("invalid model coefficients: {0}")]
    InvalidCoefficients(&'static str),

    #[error("non-finite values in the {stage} spectrum")]
    NonFiniteSpectrum { stage: &'static str },

    #[error("field must have zero mean, measured mean {mean:.3e}")]
    NonZeroMean { mean: f64 },

    #[error("frequencies outside the resonance region (need xi1 >= 0, xi2 <= 0, xi1 + xi2 >= 0)")]
    SignPattern,

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("time step {dt:.3e} exceeds the nonlinear CFL limit {limit:.3e}")]
    CflViolation { dt: f64, limit: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
