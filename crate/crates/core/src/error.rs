use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("q must satisfy 0 < q < 1, got {0}")]
    InvalidQ(String),

    #[error("alpha must be nonnegative, got {0}")]
    InvalidAlpha(String),

    #[error("argument outside the admissible domain: {0}")]
    InvalidDomain(String),

    #[error("index k = {k} exceeds n = {n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("degree must be at least 1")]
    InvalidDegree,

    /// x + gamma = 0, where the q-Pochhammer representation is 0/0.
    #[error("degenerate point x + gamma = 0; use the product form")]
    DegeneratePoint,

    #[error("closed form only covers moments of order 0, 1, 2 (got {0}); use a recurrence")]
    UnsupportedOrder(usize),

    #[error("{0} is not available in exact rational mode")]
    ExactModeUnsupported(&'static str),

    #[error("degree {n} exceeds the exact-mode cap of {cap}")]
    DegreeTooLarge { n: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
