//! Lauricella F_D.

use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method, SeriesDiagnostics};
use crate::quadrature::{integrate, QuadratureRequest};
use crate::specfun::gamma::log_gamma;
use crate::specfun::series::{SeriesAccumulator, MAX_TERMS};

fn nonpositive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x == x.round()).then(|| (-x) as usize)
}

/// F_D^{(k)}(a; b_1..b_k; c; x_1..x_k).
///
/// The multiple power series is summed by total degree N: the degree-N
/// coefficient is (a)_N/(c)_N times the t^N coefficient of Π_i (1 − x_i t)^{−b_i}.
/// When every b_i is a non-positive integer the series terminates and is
/// exact for any x. Otherwise it is used for max|x_i| ≤ 1/2, and the Euler
/// integral
///
/// ```text
/// Γ(c)/(Γ(a)Γ(c−a)) ∫₀¹ u^{a−1}(1−u)^{c−a−1} Π(1 − x_i u)^{−b_i} du
/// ```
///
/// is integrated numerically beyond that.
pub fn lauricella_fd(a: f64, b: &[f64], c: f64, x: &[f64], tol: f64) -> Result<EvalResult> {
    if b.len() != x.len() {
        return Err(Error::invalid(format!(
            "lauricella_fd: {} b-parameters but {} arguments",
            b.len(),
            x.len()
        )));
    }
    if let Some(&bad) = x.iter().find(|&&xi| !(xi < 1.0)) {
        return Err(Error::domain(format!("lauricella_fd requires every x_i < 1, got {bad}")));
    }
    if x.iter().all(|&xi| xi == 0.0) {
        return Ok(EvalResult::exact(1.0));
    }
    let terminating = b.iter().all(|&bi| nonpositive_integer(bi).is_some());
    let max_abs = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if terminating || max_abs <= 0.5 {
        return power_series(a, b, c, x, tol, terminating);
    }
    euler_integral(a, b, c, x, tol)
}

fn power_series(a: f64, b: &[f64], c: f64, x: &[f64], tol: f64, terminating: bool) -> Result<EvalResult> {
    let max_degree = if terminating {
        b.iter().filter_map(|&bi| nonpositive_integer(bi)).sum::<usize>()
    } else {
        MAX_TERMS
    };
    if nonpositive_integer(c).is_some_and(|m| m < max_degree) {
        return Err(Error::domain(format!("c = {c} hits a pole before the series ends")));
    }
    // poly[i][m] = (b_i)_m x_i^m / m!, extended lazily to degree N
    let mut factors: Vec<Vec<f64>> = b.iter().map(|_| vec![1.0]).collect();
    // running product of the first factors, truncated at degree N
    let mut acc = SeriesAccumulator::new(tol);
    acc.push(1.0);
    let mut ratio = 1.0; // (a)_N / (c)_N
    for n in 1..=max_degree {
        let nf = n as f64;
        ratio *= (a + nf - 1.0) / (c + nf - 1.0);
        for (i, f) in factors.iter_mut().enumerate() {
            let last = *f.last().unwrap();
            f.push(last * (b[i] + nf - 1.0) * x[i] / nf);
        }
        // coefficient of t^n in the product of all factors
        let mut conv = factors[0].clone();
        for f in &factors[1..] {
            let mut next = vec![0.0; n + 1];
            for (d, slot) in next.iter_mut().enumerate() {
                *slot = (0..=d).map(|j| conv[j] * f[d - j]).sum();
            }
            conv = next;
        }
        let term = ratio * conv[n];
        let done = acc.push(term);
        if !term.is_finite() {
            return Err(Error::convergence("F_D term overflowed", acc.diagnostics()));
        }
        if !terminating && done {
            return Ok(EvalResult::closed_form(acc.sum(), acc.error_estimate(), acc.diagnostics()));
        }
    }
    if terminating {
        return Ok(EvalResult::closed_form(
            acc.sum(),
            4.0 * f64::EPSILON * acc.abs_sum(),
            acc.diagnostics(),
        ));
    }
    Err(acc.not_converged("F_D power series"))
}

fn euler_integral(a: f64, b: &[f64], c: f64, x: &[f64], tol: f64) -> Result<EvalResult> {
    if !(a > 0.0 && c - a > 0.0) {
        return Err(Error::domain(format!(
            "Euler integral for F_D needs a > 0 and c - a > 0, got a = {a}, c = {c}"
        )));
    }
    let norm = (log_gamma(c)? - log_gamma(a)? - log_gamma(c - a)?).exp();
    let b = b.to_vec();
    let x = x.to_vec();
    let integrand = move |u: f64| {
        let mut v = (a - 1.0) * u.ln() + (c - a - 1.0) * (1.0 - u).ln();
        for (bi, xi) in b.iter().zip(&x) {
            v -= bi * (1.0 - xi * u).ln();
        }
        v.exp()
    };
    let res = integrate(&QuadratureRequest::finite(integrand, 0.0, 1.0).rel_tol(tol.clamp(1e-13, 1e-2)))?;
    if !res.converged {
        return Err(Error::convergence(
            "F_D Euler integral quadrature did not converge",
            SeriesDiagnostics::new(res.evaluations, res.error_estimate),
        ));
    }
    Ok(EvalResult {
        value: norm * res.value,
        error_estimate: norm * res.error_estimate,
        method: Method::Hybrid,
        diagnostics: SeriesDiagnostics::new(res.evaluations, 0.0),
        notes: vec!["F_D via Euler integral representation".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::hyper::gauss_2f1;

    #[test]
    fn one_variable_is_gauss() {
        let fd = lauricella_fd(1.0, &[0.5], 3.0, &[0.4], 1e-15).unwrap().value;
        let f21 = gauss_2f1(1.0, 0.5, 3.0, 0.4).unwrap().value;
        assert!((fd - f21).abs() < 1e-14);
        // Euler-integral branch
        let fd = lauricella_fd(1.0, &[0.5], 3.0, &[0.8], 1e-12).unwrap();
        let f21 = gauss_2f1(1.0, 0.5, 3.0, 0.8).unwrap().value;
        assert_eq!(fd.method, Method::Hybrid);
        assert!((fd.value - f21).abs() / f21 < 1e-11);
    }

    #[test]
    fn zero_arguments() {
        assert_eq!(lauricella_fd(1.0, &[0.5, 2.0], 3.0, &[0.0, 0.0], 1e-12).unwrap().value, 1.0);
    }

    #[test]
    fn terminating_series_is_polynomial() {
        // b = (-1, -1): 1 + a/c (x1 + x2) + a(a+1)/(c(c+1)) x1 x2
        let (a, c, x1, x2) = (2.0, 5.0, -3.0, 0.9);
        let v = lauricella_fd(a, &[-1.0, -1.0], c, &[x1, x2], 1e-15).unwrap().value;
        let want = 1.0 - a / c * (x1 + x2) + a * (a + 1.0) / (c * (c + 1.0)) * x1 * x2;
        assert!((v - want).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(lauricella_fd(1.0, &[0.5], 3.0, &[1.0], 1e-12), Err(Error::Domain(_))));
        assert!(lauricella_fd(1.0, &[0.5], 3.0, &[0.1, 0.2], 1e-12).is_err());
    }
}
