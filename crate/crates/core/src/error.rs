use thiserror::Error;

/// Error codes shared by every module. The `code()` string is stable and is
/// what the CLI prints in front of the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("E_STRIP_SHAPE: {0}")]
    StripShape(String),
    #[error("E_NEG_RADICAND: {0}")]
    NegRadicand(String),
    #[error("E_DEPENDENT: vector {0} lies in the span of its predecessors")]
    Dependent(usize),
    #[error("E_LABEL_RANGE: {0}")]
    LabelRange(String),
    #[error("E_SIZE_MISMATCH: {0}")]
    SizeMismatch(String),
    #[error("E_SHAPE_MISMATCH: {0}")]
    ShapeMismatch(String),
    #[error("E_SIZE: {0}")]
    Size(String),
    #[error("E_UNEXPLAINED_EIGENVALUE: {0}")]
    UnexplainedEigenvalue(String),
    #[error("E_PROJECTION_NULL: {0}")]
    ProjectionNull(String),
    #[error("E_BLOCK_DIM: {0}")]
    BlockDim(String),
    #[error("E_NOT_CLOSED: {0}")]
    NotClosed(String),
    #[error("E_ZERO_MULT: {0}")]
    ZeroMult(String),
    #[error("E_NO_COMMON_PARENT: {0}")]
    NoCommonParent(String),
    #[error("E_BAD_OVERALL: {0}")]
    BadOverall(String),
    #[error("E_PARSE at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("E_KEY_MISMATCH: {0}")]
    KeyMismatch(String),
    #[error("E_ROW_ALIGN: {0}")]
    RowAlign(String),
    #[error("E_IO: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::StripShape(_) => "E_STRIP_SHAPE",
            Error::NegRadicand(_) => "E_NEG_RADICAND",
            Error::Dependent(_) => "E_DEPENDENT",
            Error::LabelRange(_) => "E_LABEL_RANGE",
            Error::SizeMismatch(_) => "E_SIZE_MISMATCH",
            Error::ShapeMismatch(_) => "E_SHAPE_MISMATCH",
            Error::Size(_) => "E_SIZE",
            Error::UnexplainedEigenvalue(_) => "E_UNEXPLAINED_EIGENVALUE",
            Error::ProjectionNull(_) => "E_PROJECTION_NULL",
            Error::BlockDim(_) => "E_BLOCK_DIM",
            Error::NotClosed(_) => "E_NOT_CLOSED",
            Error::ZeroMult(_) => "E_ZERO_MULT",
            Error::NoCommonParent(_) => "E_NO_COMMON_PARENT",
            Error::BadOverall(_) => "E_BAD_OVERALL",
            Error::Parse { .. } => "E_PARSE",
            Error::KeyMismatch(_) => "E_KEY_MISMATCH",
            Error::RowAlign(_) => "E_ROW_ALIGN",
            Error::Io(_) => "E_IO",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Error {
        Error::Parse { pos, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
