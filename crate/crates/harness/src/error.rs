use thiserror::Error;

/// Errors surfaced by the harness. Exit codes: 0 success / no violation,
/// 1 violation found or search target unmet, 2 configuration error,
/// 3 I/O error.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] qflux_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Every probe of the saturation search was degenerate, so there is no
    /// state to report.
    #[error("saturation search found no non-degenerate candidate")]
    NoNonDegenerateCandidate,
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Core(_) => 2,
            HarnessError::Io(_) => 3,
            HarnessError::NoNonDegenerateCandidate => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
