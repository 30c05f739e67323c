//! Generalized hypergeometric series and the Gauss function ₂F₁.

use crate::error::{Error, Result};
use crate::eval::{EvalResult, SeriesDiagnostics};
use crate::specfun::gamma::{ln_gamma_signed, ln_rgamma_signed};
use crate::specfun::series::{richardson_even, SeriesAccumulator, MAX_TERMS};

/// Tolerance used internally by `gauss_2f1`.
const F21_TOL: f64 = 1e-16;

fn nonpositive_integer(x: f64) -> Option<u32> {
    if x <= 0.0 && x == x.round() && x > -(MAX_TERMS as f64) {
        Some((-x) as u32)
    } else {
        None
    }
}

/// Number of terms after which the series terminates, if any numerator
/// parameter is a non-positive integer.
fn termination_order(numer: &[f64]) -> Option<u32> {
    numer.iter().filter_map(|&a| nonpositive_integer(a)).min()
}

/// Σ_k [Π(numer)_k / Π(denom)_k] x^k / k!.
///
/// Converges for `numer.len() <= denom.len()` everywhere, and for
/// `numer.len() == denom.len() + 1` when |x| < 1. Terminating series are
/// summed exactly.
pub fn pfq_series(numer: &[f64], denom: &[f64], x: f64, tol: f64) -> Result<EvalResult> {
    let (acc, terminated) = hyper_sum(numer, denom, x, tol)?;
    let err = if terminated {
        4.0 * f64::EPSILON * acc.abs_sum()
    } else {
        acc.error_estimate()
    };
    Ok(EvalResult::closed_form(acc.sum(), err, acc.diagnostics()))
}

/// Raw series summation; the flag reports whether the series terminated.
pub(crate) fn hyper_sum(numer: &[f64], denom: &[f64], x: f64, tol: f64) -> Result<(SeriesAccumulator, bool)> {
    if !x.is_finite() {
        return Err(Error::domain(format!("pFq argument must be finite, got {x}")));
    }
    let terminate = termination_order(numer);
    if terminate.is_none() {
        let p = numer.len();
        let q = denom.len();
        if p > q + 1 || (p == q + 1 && x.abs() >= 1.0) {
            return Err(Error::domain(format!(
                "{p}F{q} series diverges at x = {x}; use an analytic continuation"
            )));
        }
    }
    for &b in denom {
        if let Some(m) = nonpositive_integer(b) {
            if terminate.map_or(true, |n| n > m) {
                return Err(Error::domain(format!("denominator parameter {b} hits a pole")));
            }
        }
    }

    let mut acc = SeriesAccumulator::new(tol);
    let mut term = 1.0;
    acc.push(term);
    let limit = terminate.map(|n| n as usize).unwrap_or(MAX_TERMS);
    let mut k = 0usize;
    while k < limit {
        let kf = k as f64;
        let num: f64 = numer.iter().map(|a| a + kf).product();
        let den: f64 = denom.iter().map(|b| b + kf).product();
        term *= num / den * x / (kf + 1.0);
        k += 1;
        let done = acc.push(term);
        if !term.is_finite() {
            return Err(Error::convergence("pFq term overflowed", acc.diagnostics()));
        }
        if terminate.is_none() && done {
            break;
        }
    }
    if terminate.is_none() && k >= limit {
        return Err(acc.not_converged("pFq"));
    }
    Ok((acc, terminate.is_some()))
}

/// Product of gamma ratios Π Γ(num_i) / Π Γ(den_j), computed in log space with
/// sign tracking. Poles in the denominators give 0.
pub(crate) fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &a in num {
        let (l, s) = ln_gamma_signed(a)?;
        ln += l;
        sign *= s;
    }
    for &b in den {
        let (l, s) = ln_rgamma_signed(b);
        if s == 0.0 {
            return Ok(0.0);
        }
        ln += l;
        sign *= s;
    }
    Ok(sign * ln.exp())
}

/// Gauss hypergeometric function ₂F₁(a, b; c; x) for −1 ≤ x ≤ 1.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<EvalResult> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("gauss_2f1 requires -1 <= x <= 1, got {x}")));
    }
    if termination_order(&[a, b]).is_some() {
        return pfq_series(&[a, b], &[c], x, F21_TOL);
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::domain(format!("c = {c} is a pole of 2F1")));
    }
    if x == 0.0 {
        return Ok(EvalResult::exact(1.0));
    }
    if x < 0.0 {
        // Pfaff: (1-x)^{-a} 2F1(a, c-b; c; x/(x-1)), new argument in (0, 1/2]
        let w = x / (x - 1.0);
        let inner = gauss_2f1(a, c - b, c, w)?;
        return Ok(inner.scaled((1.0 - x).powf(-a)));
    }
    if x <= 0.5 {
        return pfq_series(&[a, b], &[c], x, F21_TOL);
    }
    let s = c - a - b;
    if x == 1.0 {
        if s <= 0.0 {
            return Err(Error::domain(format!(
                "2F1 diverges at x = 1 when c - a - b = {s} <= 0"
            )));
        }
        let v = gamma_ratio(&[c, s], &[c - a, c - b])?;
        return Ok(EvalResult::exact(v));
    }
    let dist = (s - s.round()).abs();
    if dist > 1e-3 {
        return unit_transform(a, b, c, x);
    }
    // c - a - b (nearly) integer: the two transformation terms develop
    // cancelling poles. Shift a symmetrically and extrapolate the shift away.
    let h = 2e-3;
    let mut diag = SeriesDiagnostics::default();
    let v = richardson_even(h, |eps| {
        let up = unit_transform(a + eps, b, c, x)?;
        let down = unit_transform(a - eps, b, c, x)?;
        diag = diag.merge(up.diagnostics).merge(down.diagnostics);
        Ok(0.5 * (up.value + down.value))
    })?;
    diag.degenerate_shift = h;
    Ok(EvalResult::closed_form(v, 1e-12 * v.abs(), diag)
        .with_note("c-a-b near integer: symmetric parameter shift with Richardson extrapolation"))
}

/// Linear transformation to 1 − x, valid when c − a − b is not an integer.
fn unit_transform(a: f64, b: f64, c: f64, x: f64) -> Result<EvalResult> {
    let s = c - a - b;
    let y = 1.0 - x;
    let c1 = gamma_ratio(&[c, s], &[c - a, c - b])?;
    let c2 = gamma_ratio(&[c, -s], &[a, b])? * y.powf(s);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut diag = SeriesDiagnostics::default();
    if c1 != 0.0 {
        let f1 = pfq_series(&[a, b], &[1.0 - s], y, F21_TOL)?;
        value += c1 * f1.value;
        err += (c1 * f1.value).abs() * 4.0 * f64::EPSILON + c1.abs() * f1.error_estimate;
        diag = diag.merge(f1.diagnostics);
    }
    if c2 != 0.0 {
        let f2 = pfq_series(&[c - a, c - b], &[1.0 + s], y, F21_TOL)?;
        value += c2 * f2.value;
        err += (c2 * f2.value).abs() * 4.0 * f64::EPSILON + c2.abs() * f2.error_estimate;
        diag = diag.merge(f2.diagnostics);
    }
    Ok(EvalResult::closed_form(value, err, diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn binomial_identity() {
        let v = gauss_2f1(2.5, 1.7, 1.7, 0.3).unwrap().value;
        assert!(rel(v, 0.7f64.powf(-2.5)) < 1e-13);
        // transformation region
        let v = gauss_2f1(2.5, 1.7, 1.7, 0.8).unwrap().value;
        assert!(rel(v, 0.2f64.powf(-2.5)) < 1e-10);
        // Pfaff region
        let v = gauss_2f1(2.5, 1.7, 1.7, -0.9).unwrap().value;
        assert!(rel(v, 1.9f64.powf(-2.5)) < 1e-12);
    }

    #[test]
    fn log_identity() {
        let v = gauss_2f1(1.0, 1.0, 2.0, 0.5).unwrap().value;
        assert!(rel(v, 2.0 * 2f64.ln()) < 1e-14);
        // c - a - b = 0 exactly: degenerate path, -ln(1-x)/x
        let v = gauss_2f1(1.0, 1.0, 2.0, 0.9).unwrap();
        assert!(rel(v.value, -(0.1f64.ln()) / 0.9) < 1e-10, "{v:?}");
        assert!(v.diagnostics.degenerate_shift > 0.0);
    }

    #[test]
    fn terminating_mass_factor() {
        let delta = 1.7;
        let w = 0.8;
        let v = gauss_2f1(-1.0, 3.0 / delta, 3.0 / delta + 1.0, w).unwrap().value;
        assert!(rel(v, 1.0 - 3.0 / (delta + 3.0) * w) < 1e-15);
    }

    #[test]
    fn gauss_sum_at_unit_argument() {
        // 2F1(1/2, 1/2; 2; 1) = Γ(2)Γ(1)/Γ(3/2)² = 4/π
        let v = gauss_2f1(0.5, 0.5, 2.0, 1.0).unwrap().value;
        assert!(rel(v, 4.0 / std::f64::consts::PI) < 1e-14);
        assert!(gauss_2f1(1.0, 1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn c_pole_is_domain_error() {
        assert!(matches!(gauss_2f1(0.5, 0.5, -2.0, 0.3), Err(Error::Domain(_))));
        // terminates before the pole
        assert!(gauss_2f1(-1.0, 0.5, -2.0, 0.3).is_ok());
    }

    #[test]
    fn pfq_exponential_and_consistency() {
        let v = pfq_series(&[], &[], 1.3, 1e-16).unwrap().value;
        assert!(rel(v, 1.3f64.exp()) < 1e-15);
        let direct = pfq_series(&[0.5, 1.5], &[2.5], 0.25, 1e-16).unwrap().value;
        let gauss = gauss_2f1(0.5, 1.5, 2.5, 0.25).unwrap().value;
        assert!(rel(direct, gauss) < 1e-15);
        assert!(pfq_series(&[1.0, 1.0, 1.0], &[1.0], 0.1, 1e-12).is_err());
        assert!(pfq_series(&[1.0], &[-1.0], 0.1, 1e-12).is_err());
    }
}
