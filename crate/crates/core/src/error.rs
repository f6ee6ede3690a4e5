use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by outcome class so callers (the CLI in particular)
/// can map them onto exit codes without inspecting messages.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported alpha {alpha}: the normal-distribution table only lists 0.5, 1/3, 0.25, 0.2, 0.1, 0.05, 0.01")]
    UnsupportedAlpha { alpha: f64 },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate chance agreement: kappa is undefined when expected agreement is 1")]
    DegenerateChance,

    #[error("no history: a single-score evaluation needs a prior average")]
    NoHistory,

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors caused by a numerical routine failing to converge,
    /// as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
