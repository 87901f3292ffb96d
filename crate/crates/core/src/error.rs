//! Error type shared by every stage of the learner.

use thiserror::Error;

/// Failures raised by geometry helpers, oracles and learning stages.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("required sample size {needed} exceeds cap {cap} in {stage}")]
    SampleCap {
        stage: &'static str,
        needed: u64,
        cap: u64,
    },

    #[error("small-class oracle found no negative point in {attempts} attempts")]
    SmallClassUnreachable { attempts: u64 },

    #[error("no negative point found in {attempts} attempts")]
    NoNegativeFound { attempts: u64 },

    #[error("empirical Chow vector is degenerate (norm {norm:e})")]
    DegenerateChow { norm: f64 },

    #[error("offset not found after {steps} bisection steps")]
    OffsetNotFound { steps: usize },

    #[error("tournament called with no candidates")]
    NoCandidates,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True when the failure is a global budget cut-off rather than a stage failure.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
