use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Numerical-structure failures carry the name of the invariant that broke so
/// callers (the CLI in particular) can report it verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DegenerateDivisor,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("symmetric eigensolver did not converge after {sweeps} sweeps")]
    EigenFailure { sweeps: usize },

    #[error("numerically singular system (pivot {pivot} at column {column})")]
    SingularSystem { column: usize, pivot: String },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid mass point: {0}")]
    InvalidMassPoint(String),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("structure error in `{invariant}`: {detail}")]
    StructureError { invariant: String, detail: String },

    #[error("assumption violated at pole {pole}: {detail}")]
    AssumptionViolated { pole: String, detail: String },

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    #[error("zeros are not real and simple: {0}")]
    ZerosNotSimple(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn structure(invariant: &str, detail: impl Into<String>) -> Self {
        Error::StructureError {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
