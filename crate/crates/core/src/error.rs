use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid grid: support_exp {support_exp} + constancy_exp {constancy_exp} < 0")]
    InvalidGrid {
        support_exp: i64,
        constancy_exp: i64,
    },

    #[error("grid of size {p}^{exp} exceeds the supported maximum of 2^{max_log2} nodes")]
    GridTooLarge { p: u32, exp: i64, max_log2: u32 },

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("value vector has length {got}, grid expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("interpolation system is singular or inconsistent (residual {residual:e})")]
    SingularSystem { residual: f64 },

    #[error("no compact frequency support found up to support_exp {searched_up_to}")]
    NoCompactSupport { searched_up_to: i64 },

    #[error("refinement system is inconsistent: residual {residual:e} exceeds {threshold:e}")]
    Inconsistent { residual: f64, threshold: f64 },

    #[error("no wavelet mask with nonzero resultant found in {trials} trials")]
    NoWaveletMask { trials: usize },

    #[error("translate family is degenerate: all Gram eigenvalues below rank tolerance")]
    DegenerateFamily,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error: {0}")]
    Parse(String),
}
