//! Truncation policy shared by every series in the crate.

use crate::error::{Error, Result};
use crate::eval::SeriesDiagnostics;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 10_000;

/// Consecutive below-tolerance terms required before a series is declared converged.
pub const SMALL_RUN: usize = 3;

/// Running sum implementing the stop rule: three consecutive terms each below
/// `tol·|partial sum|`.
#[derive(Debug, Clone)]
pub struct SeriesAccumulator {
    tol: f64,
    sum: f64,
    abs_sum: f64,
    max_term: f64,
    small_run: usize,
    terms: usize,
    last_term: f64,
}

impl SeriesAccumulator {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            sum: 0.0,
            abs_sum: 0.0,
            max_term: 0.0,
            small_run: 0,
            terms: 0,
            last_term: 0.0,
        }
    }

    /// Add a term; returns true once the stop rule has fired.
    pub fn push(&mut self, term: f64) -> bool {
        self.sum += term;
        self.abs_sum += term.abs();
        self.max_term = self.max_term.max(term.abs());
        self.terms += 1;
        self.last_term = term;
        if term.abs() <= self.tol * self.sum.abs() || term == 0.0 && self.sum == 0.0 {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= SMALL_RUN
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    pub fn max_term(&self) -> f64 {
        self.max_term
    }

    pub fn exhausted(&self) -> bool {
        self.terms >= MAX_TERMS
    }

    /// Ratio Σ|term| / |Σ term|, the amplification of rounding errors.
    pub fn condition(&self) -> f64 {
        if self.sum == 0.0 {
            if self.abs_sum == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.abs_sum / self.sum.abs()).max(1.0)
        }
    }

    pub fn diagnostics(&self) -> SeriesDiagnostics {
        SeriesDiagnostics::new(self.terms, self.last_term)
    }

    /// Truncation plus rounding error estimate.
    pub fn error_estimate(&self) -> f64 {
        self.last_term.abs() * SMALL_RUN as f64 + 4.0 * f64::EPSILON * self.abs_sum
    }

    pub fn not_converged(&self, what: &str) -> Error {
        Error::convergence(
            format!("{what}: stop rule did not fire within {MAX_TERMS} terms"),
            self.diagnostics(),
        )
    }
}

/// Extrapolate `f(0)` from evaluations of an even function of the shift at
/// h, 2h, 4h, cancelling the h² and h⁴ error terms.
pub fn richardson_even<F>(h: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f1 = f(h)?;
    let f2 = f(2.0 * h)?;
    let f4 = f(4.0 * h)?;
    let r1 = (4.0 * f1 - f2) / 3.0;
    let r2 = (4.0 * f2 - f4) / 3.0;
    Ok((16.0 * r1 - r2) / 15.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stop_rule_needs_three_small_terms() {
        let mut acc = SeriesAccumulator::new(1e-3);
        assert!(!acc.push(1.0));
        assert!(!acc.push(1e-4));
        assert!(!acc.push(1e-4));
        // a large term resets the run
        assert!(!acc.push(0.5));
        assert!(!acc.push(1e-5));
        assert!(!acc.push(1e-5));
        assert!(acc.push(1e-5));
        assert_eq!(acc.terms(), 7);
    }

    #[test]
    fn richardson_removes_even_terms() {
        let v = richardson_even(0.01, |h| Ok(2.0 + 3.0 * h * h - 5.0 * h.powi(4))).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }
}
