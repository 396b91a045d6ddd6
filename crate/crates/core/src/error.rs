use thiserror::Error;

/// Errors produced by operator construction and evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// A matrix failed operator certification at construction.
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// Operator arithmetic that must yield a Hermitian result did not.
    /// Signals corrupted arithmetic rather than bad caller input.
    #[error("non-Hermitian result (max deviation {max_dev:.3e})")]
    NonHermitianResult { max_dev: f64 },

    /// A state vector violated the normalization invariant.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A waveform was evaluated outside its domain of definition.
    #[error("waveform domain error: t = {t} outside [{t_min}, {t_max}]")]
    WaveformDomain { t: f64, t_min: f64, t_max: f64 },

    /// A waveform violated a construction invariant.
    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    /// A physical constant violated its sign or finiteness constraint.
    #[error("invalid constant: {0}")]
    InvalidConstant(String),

    /// An operator schedule has no terms.
    #[error("operator schedule must contain at least one term")]
    EmptySchedule,

    /// The propagator detected per-step norm drift beyond the stability
    /// threshold; the step size is too large for the given generator.
    #[error("step too large: norm drift {drift:.3e} at t = {t}")]
    StepTooLarge { t: f64, drift: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
