//! Closed-form stellar-model quantities and thermonuclear reaction-rate
//! integrals, expressed through Gauss hypergeometric, Lauricella and Meijer
//! G-functions, each paired with an adaptive-quadrature oracle.

pub mod cli;
pub mod error;
pub mod eval;
pub mod quadrature;
pub mod rates;
pub mod specfun;
pub mod stellar;
pub mod verify;

pub use error::{Error, Result};
pub use eval::{DualResult, EvalResult, Method, SeriesDiagnostics};
