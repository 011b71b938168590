use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::line::LineRelation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single violated invariant, located by row or field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

fn join_diagnostics(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid screw: {0}")]
    InvalidScrew(String),

    #[error("lines do not intersect")]
    NotIntersecting,

    #[error("no unique common perpendicular for {0:?} lines")]
    NoUniqueNormal(LineRelation),

    #[error("expected {expected} joint values, got {actual}")]
    JointCountMismatch { expected: usize, actual: usize },

    #[error("invalid model: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("conversion failed: {0}")]
    Conversion(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
