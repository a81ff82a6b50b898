//! Error type shared by every module in the crate.

use std::fmt;
use std::path::PathBuf;

/// Pipeline stage that produced an error, used to label propagated failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Nilt,
    Fit,
    Conversion,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Nilt => write!(f, "inverse Laplace stage"),
            Stage::Fit => write!(f, "fitting stage"),
            Stage::Conversion => write!(f, "conversion stage"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IridError {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("polynomial degree error: {0}")]
    Degree(String),

    #[error("denominator vanishes at omega = {omega}")]
    DenominatorZero { omega: f64 },

    #[error("transfer function is singular at s = 0")]
    SingularInput,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("transform evaluation returned a non-finite value at s = {re} + {im}j")]
    Evaluation { re: f64, im: f64 },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("least-squares system is singular: {0}")]
    SingularSystem(String),

    #[error("iteration {iteration} produced non-finite coefficients")]
    NonFiniteIterate { iteration: usize },

    #[error("discrete denominator has a root at z = -1; bilinear image is at infinity")]
    PoleAtMinusOne,

    #[error("series grids do not match: {0}")]
    GridMismatch(String),

    #[error("magnitude vanishes at omega = {omega}")]
    ZeroMagnitude { omega: f64 },

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<IridError>,
    },
}

impl IridError {
    pub(crate) fn at(stage: Stage) -> impl FnOnce(IridError) -> IridError {
        move |source| IridError::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// True for errors caused by invalid user input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        match self {
            IridError::Param(_) | IridError::Config(_) => true,
            IridError::Stage { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, IridError>;
