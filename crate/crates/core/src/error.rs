use alloc::string::String;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ill-conditioned problem (condition estimate {estimate:e}): {context}")]
    Conditioning { estimate: f64, context: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("quadrature did not reach tolerance {tolerance:e} (last change {change:e})")]
    Quadrature { tolerance: f64, change: f64 },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("pole or singular denominator: {0}")]
    Pole(String),
    #[error("degenerate map: {0}")]
    Degenerate(String),
    #[error("representation {rep} does not apply: {reason}")]
    RepresentationMismatch { rep: String, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
