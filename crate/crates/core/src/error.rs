use alloc::string::String;

/// Errors raised by the simulator kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not symplectic (max deviation of S Sigma S^dagger from Sigma is {deviation:.3e})")]
    NotSymplectic { deviation: f64 },

    #[error("matrix is not symmetric (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("phase-space matrix lacks the [[a, b], [conj b, conj a]] block form (max deviation {deviation:.3e})")]
    NotBlockForm { deviation: f64 },

    #[error("covariance matrix is unphysical: {0}")]
    Unphysical(String),

    #[error("matrix is singular or ill-conditioned (condition number {condition:.3e})")]
    Singular { condition: f64 },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("oracle cutoff {cutoff} cannot represent index {index}")]
    CutoffTooSmall { cutoff: usize, index: usize },

    #[error("internal consistency check `{check}` failed: residual {residual:.3e} exceeds {tolerance:.1e}")]
    Consistency {
        check: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("{what} has {size} entries, above the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("current chain state has zero prior probability")]
    ZeroPriorState,

    #[error("no proposal with nonzero prior probability after {draws} draws")]
    InitializationFailed { draws: usize },

    #[error("distribution is empty")]
    EmptyDistribution,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason })
    }
}
