use thiserror::Error;

/// Error categories surfaced by the library. The CLI maps each variant onto an
/// exit code, so new variants must pick one of the existing categories.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value {value} out of range [{lo}, {hi}]")]
    OutOfRange { value: i64, lo: i64, hi: i64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The brute-force enumeration would touch more residues than allowed.
    #[error("work cap exceeded: {work} residues > cap {cap}")]
    WorkCapExceeded { work: u128, cap: u128 },

    #[error("system has infinite complexity: forms {0} and {1} have dependent linear parts")]
    InfiniteComplexity(usize, usize),

    #[error("degenerate system: {0}")]
    Degenerate(String),

    #[error("range violation: {0}")]
    Range(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse category used for exit codes and machine-readable error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config,
    Range,
    Capacity,
    Degeneracy,
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => Category::Config,
            Error::OutOfRange { .. } | Error::Range(_) => Category::Range,
            Error::Capacity(_) | Error::WorkCapExceeded { .. } | Error::Overflow(_) => {
                Category::Capacity
            }
            Error::InfiniteComplexity(..) | Error::Degenerate(_) => Category::Degeneracy,
        }
    }
}
