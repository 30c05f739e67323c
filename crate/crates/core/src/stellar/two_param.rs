//! Pressure of the two-parameter profile ρ = ρ_c(1 − x^δ)^γ.
//!
//! Expanding the mass integrand binomially and integrating the hydrostatic
//! equation term by term gives, with X = x^δ and b_m = 2/δ + m,
//!
//! ```text
//! P / (4πGρ_c²R²) = (1/δ) Σ_m c_m J_m(X),
//! c_m = (−γ)_m / (m! (3 + mδ)),     J_m(X) = ∫_X^1 w^{b_m − 1}(1 − w)^γ dw.
//! ```
//!
//! J_m obeys the forward recurrence
//! `J_{m+1} = (b_m J_m + X^{b_m}(1−X)^{γ+1}) / (b_m + γ + 1)`, which only adds
//! positive numbers. For large m, J_m tends to the complete beta function
//! B(b_m, γ+1) and the terms decay like m^{−2γ−3}; the remainder is an
//! Euler–Maclaurin tail of the continuous term function. For integer γ the
//! sum is finite and exact.

use crate::error::{Error, Result};
use crate::eval::{EvalResult, SeriesDiagnostics};
use crate::quadrature::{integrate, QuadratureRequest};
use crate::specfun::gamma::{beta, ln_gamma_signed, log_gamma};
use crate::specfun::hyper::{gauss_2f1, pfq_series};

/// Terms summed explicitly before the asymptotic tail takes over.
const HEAD_TERMS: usize = 1000;
/// Hard cap on explicit terms near the surface, where X^m decays slowly.
const MAX_HEAD_TERMS: usize = 2_000_000;
const NEGLIGIBLE: f64 = 1e-18;

/// lnΓ(x + d) − lnΓ(x) for large x, via the Stirling series.
fn ln_gamma_shift(x: f64, d: f64) -> f64 {
    const B: [f64; 4] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0];
    let y = x + d;
    let mut v = (x - 0.5) * (d / x).ln_1p() + d * y.ln() - d;
    let (mut px, mut py) = (1.0 / x, 1.0 / y);
    let (ix2, iy2) = (px * px, py * py);
    for c in B {
        v += c * (py - px);
        px *= ix2;
        py *= iy2;
    }
    v
}

#[derive(Debug, Clone)]
pub(crate) struct TwoParamPressure {
    delta: f64,
    gamma: f64,
    /// Number of terms for integer γ.
    finite: Option<usize>,
    /// Σ_{m ≥ HEAD_TERMS} c_m B(b_m, γ+1).
    tail: f64,
    tail_error: f64,
}

impl TwoParamPressure {
    pub(crate) fn new(delta: f64, gamma: f64) -> Result<Self> {
        let finite = (gamma == gamma.round() && gamma <= 1000.0).then(|| gamma as usize + 1);
        let mut this = Self { delta, gamma, finite, tail: 0.0, tail_error: 0.0 };
        if finite.is_none() {
            let (tail, err) = this.tail_sum(HEAD_TERMS as f64)?;
            this.tail = tail;
            this.tail_error = err;
        }
        Ok(this)
    }

    /// c_m B(b_m, γ+1) as a smooth function of real m > γ.
    fn asymptotic_term(&self, m: f64) -> f64 {
        let (g, d) = (self.gamma, self.delta);
        let b = 2.0 / d + m;
        // Γ(−γ) is finite for non-integer γ
        let (lg_neg, sign) = ln_gamma_signed(-g).unwrap_or((0.0, 0.0));
        let lg1 = log_gamma(g + 1.0).unwrap_or(0.0);
        let ln = -ln_gamma_shift(m - g, g + 1.0) - lg_neg - (3.0 + m * d).ln() + lg1 - ln_gamma_shift(b, g + 1.0);
        sign * ln.exp()
    }

    /// Euler–Maclaurin estimate of Σ_{m ≥ start} c_m B(b_m, γ+1).
    fn tail_sum(&self, start: f64) -> Result<(f64, f64)> {
        let integral = integrate(
            &QuadratureRequest::semi_infinite(|m| self.asymptotic_term(m), start).rel_tol(1e-12),
        )?;
        let t0 = self.asymptotic_term(start);
        let h = 0.5;
        let d1 = (self.asymptotic_term(start + h) - self.asymptotic_term(start - h)) / (2.0 * h);
        let value = integral.value + 0.5 * t0 - d1 / 12.0;
        // the next Euler–Maclaurin term is O(T'''), about T·p³/M³
        let p = 2.0 * self.gamma + 3.0;
        let err = integral.error_estimate + t0.abs() * (p / start).powi(3) / 720.0;
        Ok((value, err))
    }

    /// J_0(X) = ∫_X^1 w^{2/δ − 1}(1 − w)^γ dw.
    fn j0(&self, xd: f64) -> Result<f64> {
        let b0 = 2.0 / self.delta;
        let g = self.gamma;
        if xd == 0.0 {
            return beta(b0, g + 1.0);
        }
        if xd <= 0.5 {
            let k = xd.powf(b0) / b0 * gauss_2f1(-g, b0, b0 + 1.0, xd)?.value;
            return Ok(beta(b0, g + 1.0)? - k);
        }
        // Euler-transformed incomplete beta, all terms positive
        let y = 1.0 - xd;
        let f = pfq_series(&[1.0, g + 1.0 + b0], &[g + 2.0], y, 1e-17)?.value;
        Ok(y.powf(g + 1.0) * xd.powf(b0) / (g + 1.0) * f)
    }

    /// P / (4πGρ_c²R²) at fractional radius x ∈ [0, 1].
    pub(crate) fn reduced(&self, x: f64) -> Result<EvalResult> {
        if x >= 1.0 {
            return Ok(EvalResult::exact(0.0));
        }
        let (d, g) = (self.delta, self.gamma);
        let xd = x.powf(d);
        let y = 1.0 - xd;
        let mut j = self.j0(xd)?;
        let mut bm = beta(2.0 / d, g + 1.0)?;
        let mut coeff = 1.0; // (−γ)_m / m!
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut head_complete = 0.0; // Σ_{m ≥ HEAD_TERMS} c_m B_m already summed explicitly
        let limit = self.finite.unwrap_or(MAX_HEAD_TERMS);
        let ln_x = xd.ln();
        let mut m = 0usize;
        while m < limit {
            let mf = m as f64;
            let b = 2.0 / d + mf;
            let cm = coeff / (3.0 + mf * d);
            let term = cm * j;
            sum += term;
            abs_sum += term.abs();
            if m >= HEAD_TERMS {
                head_complete += cm * bm;
            }
            // after HEAD_TERMS, stop once J_m has converged to B_m: K_m ≤ X^{b}/b
            if self.finite.is_none() && m + 1 >= HEAD_TERMS {
                let k_bound = if xd == 0.0 { 0.0 } else { (b * ln_x).exp() / b };
                if (cm * k_bound).abs() <= NEGLIGIBLE * sum.abs() {
                    m += 1;
                    break;
                }
            }
            let xb = if xd == 0.0 { 0.0 } else { (b * ln_x).exp() };
            j = (b * j + xb * y.powf(g + 1.0)) / (b + g + 1.0);
            bm *= b / (b + g + 1.0);
            coeff *= (mf - g) / (mf + 1.0);
            m += 1;
        }
        let mut diag = SeriesDiagnostics::new(m, 0.0);
        let err;
        if self.finite.is_some() {
            err = 4.0 * f64::EPSILON * abs_sum;
        } else {
            if m >= MAX_HEAD_TERMS {
                return Err(Error::convergence(
                    format!("two-parameter pressure series too slow at x = {x}"),
                    diag,
                ));
            }
            sum += self.tail - head_complete;
            err = self.tail_error + 8.0 * f64::EPSILON * abs_sum;
            diag.truncation_estimate = self.tail_error;
        }
        Ok(EvalResult::closed_form(sum / d, err / d, diag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(delta: f64, gamma: f64, x: f64) -> f64 {
        // ∫_x^1 m(s) (1 − s^δ)^γ / s² ds with m(s) = ∫_0^s t²(1 − t^δ)^γ dt
        let m = |s: f64| {
            integrate(&QuadratureRequest::finite(|t: f64| t * t * (1.0 - t.powf(delta)).powf(gamma), 0.0, s).rel_tol(1e-13))
                .unwrap()
                .value
        };
        integrate(&QuadratureRequest::finite(move |s: f64| m(s) * (1.0 - s.powf(delta)).powf(gamma) / (s * s), x, 1.0).rel_tol(1e-12))
            .unwrap()
            .value
    }

    #[test]
    fn shift_matches_log_gamma() {
        for (x, d) in [(50.0, 1.5), (1000.0, 0.3), (12345.5, 2.5)] {
            let want = log_gamma(x + d).unwrap() - log_gamma(x).unwrap();
            let got = ln_gamma_shift(x, d);
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{x} {d}: {got} vs {want}");
        }
    }

    #[test]
    fn fractional_gamma_matches_hydrostatic_integral() {
        for &(d, g) in &[(2.0, 1.5), (0.7, 0.4), (3.0, 2.3)] {
            let p = TwoParamPressure::new(d, g).unwrap();
            for &x in &[0.0, 0.3, 0.72, 0.97] {
                let v = p.reduced(x).unwrap().value;
                let want = oracle(d, g, x);
                let p0 = p.reduced(0.0).unwrap().value;
                assert!((v - want).abs() < 1e-10 * p0, "δ={d} γ={g} x={x}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn integer_gamma_is_finite_sum() {
        let p = TwoParamPressure::new(2.0, 2.0).unwrap();
        let r = p.reduced(0.4).unwrap();
        assert_eq!(r.diagnostics.terms_used, 3);
        assert!((r.value - oracle(2.0, 2.0, 0.4)).abs() < 1e-12);
        assert_eq!(p.reduced(1.0).unwrap().value, 0.0);
    }
}
