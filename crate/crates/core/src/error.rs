use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid slope {n}/{k}: {reason}")]
    InvalidSlope { n: String, k: String, reason: &'static str },

    #[error("invalid continued fraction: {0}")]
    InvalidNcf(String),

    #[error("empty input")]
    Empty,

    #[error("matrix has zero determinant")]
    ZeroDeterminant,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("eta must lie in the upper half-plane, got {0}")]
    BadEta(String),

    #[error("theta series needs more than {0} terms to reach the tolerance")]
    NoConvergence(usize),

    #[error("truncation radius {0} is too small for the requested tolerance")]
    Truncation(usize),

    #[error("tau lies in (1/n)Λ; the relations are undefined there")]
    DegenerateTau,

    #[error("denominator {0} is too close to zero")]
    NearZero(String),

    #[error("all coordinates vanish at this point")]
    BasePoint,

    #[error("index {index} out of range 1..={max}")]
    Index { index: usize, max: usize },

    #[error("integer {0} does not fit the numerical layer")]
    Overflow(String),

    #[error("cannot parse {0:?}")]
    Parse(String),

    #[error("exact check failed: {0}")]
    ExactCheck(String),

    #[error("{0} requires a good constant c = n/2 + m·eta")]
    BadConstant(&'static str),
}

impl Error {
    /// A stable machine-readable name for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSlope { .. } => "invalid_slope",
            Error::InvalidNcf(_) => "invalid_ncf",
            Error::Empty => "empty",
            Error::ZeroDeterminant => "zero_determinant",
            Error::Dimension(_) => "dimension",
            Error::BadEta(_) => "bad_eta",
            Error::NoConvergence(_) => "no_convergence",
            Error::Truncation(_) => "truncation",
            Error::DegenerateTau => "degenerate_tau",
            Error::NearZero(_) => "near_zero",
            Error::BasePoint => "base_point",
            Error::Index { .. } => "index",
            Error::Overflow(_) => "overflow",
            Error::Parse(_) => "parse",
            Error::ExactCheck(_) => "exact_check",
            Error::BadConstant(_) => "bad_constant",
        }
    }
}
