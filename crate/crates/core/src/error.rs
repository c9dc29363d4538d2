use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("illegal substitution: {0}")]
    IllegalSubstitution(String),
    #[error("refusing to expand a sum to power {exponent} (cap {cap})")]
    ExpansionCap { exponent: u32, cap: u32 },
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("on-shell reduction did not terminate: {0}")]
    NonTerminating(String),
    #[error("numeric evaluation hit a pole after {0} redraws")]
    Pole(usize),
    #[error("aborted: {0}")]
    Aborted(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
