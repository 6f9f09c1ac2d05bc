//! Crate-wide error type.
//!
//! Variants map one-to-one onto the CLI exit codes: parse errors exit 2,
//! compilation errors 3, physics/structure failures 4, I/O errors 5.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("compilation error: {0}")]
    Compile(String),

    #[error("physics error: {0}")]
    Physics(String),

    /// A state failed a structural check (e.g. it is not pseudo-pure
    /// within tolerance). Carries the worst observed deviation.
    #[error("structure failure: {what} (worst deviation {worst_deviation:.3e})")]
    Structure { what: String, worst_deviation: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Compile(_) => 3,
            Error::Physics(_) | Error::Structure { .. } | Error::Dimension(_) => 4,
            Error::Io(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
