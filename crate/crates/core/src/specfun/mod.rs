//! Special-function evaluators: gamma machinery, hypergeometric series,
//! Lauricella F_D and the Meijer G^{q,0}_{p,q} residue evaluator.

pub mod gamma;
pub mod hyper;
pub mod lauricella;
pub mod meijer;
pub mod series;

pub use gamma::{beta, binomial, gamma, ln_gamma_signed, log_gamma, pochhammer};
pub use hyper::{gauss_2f1, pfq_series};
pub use lauricella::lauricella_fd;
pub use meijer::{meijer_g, MeijerGSpec};
pub use series::SeriesAccumulator;
