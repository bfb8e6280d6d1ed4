use std::path::Path;

/// Errors shared across the toolkit.
///
/// `Input` covers bad arguments and malformed in-memory data, `Parse` carries
/// file/line context for text formats, and `Convergence` reports an iterative
/// solver that ran out of iterations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("failed to converge after {iters} iterations (worst residual {residual:.3e})")]
    Convergence { residual: f64, iters: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn parse(path: &Path, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.display().to_string(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
