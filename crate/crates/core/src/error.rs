use thiserror::Error;

use crate::eval::SeriesDiagnostics;

/// Errors raised by the evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma has a pole at x = {0}")]
    Pole(f64),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("series did not converge after {} terms: {message}", .diagnostics.terms_used)]
    Convergence {
        message: String,
        diagnostics: SeriesDiagnostics,
    },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("integrand returned NaN at x = {abscissa} ({layer})")]
    NanIntegrand { abscissa: f64, layer: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn convergence(message: impl Into<String>, diagnostics: SeriesDiagnostics) -> Self {
        Error::Convergence {
            message: message.into(),
            diagnostics,
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}
