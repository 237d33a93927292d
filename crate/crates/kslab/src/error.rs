use thiserror::Error;

/// Crate-wide error type. Domain errors carry enough context to be
/// actionable from the CLI without re-deriving state.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot invert zero in Q(sqrt 2)")]
    ZeroInverse,

    #[error("cannot canonicalize the zero vector")]
    ZeroVector,

    #[error("duplicate ray at position {index} (projectively equal to an earlier ray)")]
    DuplicateRay { index: usize },

    #[error("coloring is partial: set has {expected} rays, coloring has {got} values")]
    PartialColoring { expected: usize, got: usize },

    #[error("context axis for ray {ray} (context {context}) is not perpendicular to the measured direction")]
    InvalidContext { ray: usize, context: usize },

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("invalid model: {0}")]
    ModelInvalid(String),

    #[error("invalid scenario: {0}")]
    ScenarioInvalid(String),

    #[error("scenario schedule is empty")]
    EmptySchedule,

    #[error("schedule does not cover direction {ray} with measurements by both observers")]
    ScheduleMissingDirection { ray: usize },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("direction is not a unit vector")]
    NonUnitDirection,

    #[error("triple is not orthonormal")]
    NonOrthonormalTriple,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
