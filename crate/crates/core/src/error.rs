use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range (limit {limit})")]
    Range { index: usize, limit: usize },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("interface error: {0}")]
    Interface(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("{what} parse error: {message}")]
    Parse { what: &'static str, message: String },

    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("unbound name: {0}")]
    Unbound(String),

    #[error("synthesis error: {0}")]
    Synthesis(String),

    #[error("diverging count: {0}")]
    DivergingCount(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
