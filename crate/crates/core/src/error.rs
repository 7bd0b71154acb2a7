use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument is valid but beyond the range the kernel is certified for.
    #[error("range error: {0}")]
    Range(String),

    /// No finite design satisfies the request.
    #[error("infeasible design: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("duplicate paper_id values: {}", .0.join(", "))]
    DuplicateIds(Vec<String>),

    /// Sample has zero variance so the statistic is undefined.
    #[error("degenerate sample: every observation equals {value}")]
    DegenerateSample { value: f64 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{0}")]
    Validation(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("{0} did not converge")]
    Convergence(&'static str),
}

impl Error {
    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Config(_)
                | Error::EmptyDataset
                | Error::DuplicateIds(_)
                | Error::Parse { .. }
                | Error::Validation(_)
                | Error::Io(_)
        )
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
