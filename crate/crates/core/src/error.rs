use std::path::PathBuf;

/// Errors raised by the laboratory.
///
/// The variants follow the failure classes every operation documents:
/// a violated precondition on an argument (`Domain`), an unusable
/// configuration or a resource cap (`Config`), a numerical contract that
/// could not be met (`Numerical`), and plumbing failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {message} (worst residual {worst_residual:e})")]
    Numerical { message: String, worst_residual: f64 },

    #[error("pair is not controllable (numeric rank {rank} < {n})")]
    Uncontrollable { rank: usize, n: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable tag used when errors are recorded per trial.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Config(_) => "config",
            Error::Numerical { .. } => "numerical",
            Error::Uncontrollable { .. } => "uncontrollable",
            Error::Io { .. } => "io",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
