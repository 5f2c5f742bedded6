use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: point {point} out of range for v = {v}")]
    PointOutOfRange { line: usize, point: usize, v: usize },

    #[error("line {line}: point {point} repeated")]
    DuplicatePoint { line: usize, point: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("not a partial geometry: {0}")]
    NotPartialGeometry(String),

    #[error("not a projective plane: {0}")]
    NotProjectivePlane(String),

    #[error("not a maximal arc: {0}")]
    NotMaximalArc(String),

    #[error("not strongly regular: {0}")]
    NotStronglyRegular(String),

    #[error("{0}")]
    Refused(String),

    #[error("clique limit of {limit} exceeded")]
    CliqueLimitExceeded { limit: usize },

    #[error("invalid parallel class: {0}")]
    InvalidParallelClass(String),

    #[error("invalid orthogonal family: {0}")]
    InvalidFamily(String),

    #[error("parse error at line {line}: {cause}")]
    Parse { line: usize, cause: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
