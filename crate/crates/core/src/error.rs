use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid truncation window: {0}")]
    InvalidWindow(String),

    #[error("window has no interior indices (N = {n}, padding = {padding})")]
    EmptyInterior { n: usize, padding: usize },

    #[error("operand mismatch: {0}")]
    Mismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix 1-norm {norm:.3e} exceeds exponential bound {bound:.3e}")]
    ExpOverflow { norm: f64, bound: f64 },

    #[error("matrix is singular to tolerance (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),

    #[error("parameters outside the unitary range: {0}")]
    ParameterRange(String),

    #[error("parameters belong to no series: {0}")]
    Classification(String),

    #[error("invalid Möbius element: {0}")]
    InvalidMobius(String),

    #[error("flow time {time} exceeds segment cap {cap}")]
    FlowTimeCap { time: f64, cap: f64 },

    #[error("cannot parse path literal: {0}")]
    PathSyntax(String),

    #[error("oracle sampling grid too small: tail coefficient {tail:.3e} at size {size}")]
    GridTooSmall { tail: f64, size: usize },

    #[error("oracle precondition violated: {0}")]
    OracleRange(String),

    #[error("index {index} outside the domain of {what}")]
    IndexDomain { index: i64, what: String },

    #[error("incompatible shift: {0}")]
    IncompatibleShift(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of floating-point machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ExpOverflow { .. } | Error::Singular { .. } | Error::NonFinite(_) | Error::GridTooSmall { .. }
        )
    }
}
