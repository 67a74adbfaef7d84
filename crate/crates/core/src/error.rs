use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants split into three families: invalid input, numerical
/// certification failures, and I/O. Callers that need coarse routing (the CLI
/// exit codes, for example) can use [`Error::is_invalid_input`] and
/// [`Error::is_io`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e}, error {error:e})")]
    QuadratureNonconvergence { estimate: f64, error: f64, tolerance: f64 },

    #[error("singular kernel near the origin could not be resolved: {0}")]
    SingularityHandling(String),

    #[error("samples do not decay at the grid ends (boundary value {boundary:e} > threshold {threshold:e})")]
    InsufficientDecay { boundary: f64, threshold: f64 },

    #[error("grid cannot certify tolerance {tolerance:e} (certified bound {bound:e})")]
    GridTooCoarse { bound: f64, tolerance: f64 },

    #[error("series terms grew for {terms} consecutive orders before meeting tolerance (best partial sum {best:e})")]
    SeriesDivergence { terms: usize, best: f64 },

    #[error("gamma pole at argument {argument} in series term {term}; use quadrature instead")]
    GammaPole { term: usize, argument: f64 },

    #[error("moment of order q={q} diverges (requires q < {limit})")]
    DivergentMoment { q: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn is_invalid_input(&self) -> bool {
        matches!(self, Error::InvalidParameter(_) | Error::DivergentMoment { .. })
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
