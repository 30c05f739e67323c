//! Meijer G-functions with no `a`-poles, G^{q,0}_{p,q}(x | a; b), p < q.
//!
//! G(x) = (1/2πi) ∫ Π Γ(b_j + s) / Π Γ(a_i + s) x^{-s} ds.
//!
//! Closing the contour to the left picks up the poles s = −b_h − k. For
//! pairwise non-integer differences of the `b` list each pole is simple and
//!
//! ```text
//! G = Σ_h x^{b_h} Π_{j≠h} Γ(b_j − b_h) / Π_i Γ(a_i − b_h)
//!         · pF_{q−1}(1 + b_h − a; 1 + b_h − b_{j≠h}; (−1)^{p+q} x)
//! ```
//!
//! Degenerate lists (differences in ℤ) are evaluated by spreading each
//! coincident group symmetrically by ±ε, averaging, and extrapolating ε → 0.
//! When the residue sum loses too many digits to cancellation (large x) the
//! Mellin–Barnes integral is instead integrated along a vertical line
//! through the saddle point of the integrand.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method, SeriesDiagnostics};
use crate::quadrature::{integrate, QuadratureRequest};
use crate::specfun::gamma::{ln_gamma_complex, ln_gamma_signed, ln_rgamma_signed};
use crate::specfun::hyper::hyper_sum;
use crate::specfun::series::richardson_even;

/// Base shift h for the degenerate-parameter extrapolation (levels h, 2h, 4h).
pub const DEGENERATE_SHIFT: f64 = 2e-3;

/// The shifted residues carry x^{±ε}, so the shift must also stay small
/// against 1/|ln x| for the extrapolation to remain accurate.
fn degenerate_shift(x: f64) -> f64 {
    DEGENERATE_SHIFT.min(0.02 / x.ln().abs().max(1.0))
}

/// Two lower parameters are treated as coincident mod 1 within this distance.
const DEGENERACY_TOL: f64 = 1e-7;

/// Internal stop tolerance for residue series; terms decay factorially so
/// summing to full precision costs a handful of extra terms.
const RESIDUE_TOL: f64 = 1e-17;

#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    upper: Vec<f64>,
    lower: Vec<f64>,
    argument: f64,
}

impl MeijerGSpec {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, argument: f64) -> Result<Self> {
        if upper.len() >= lower.len() {
            return Err(Error::invalid(format!(
                "G^{{q,0}}_{{p,q}} needs p < q, got p = {}, q = {}",
                upper.len(),
                lower.len()
            )));
        }
        if !(argument > 0.0 && argument.is_finite()) {
            return Err(Error::invalid(format!("G-function argument must be > 0, got {argument}")));
        }
        if upper.iter().chain(&lower).any(|v| !v.is_finite()) {
            return Err(Error::invalid("G-function parameters must be finite"));
        }
        Ok(Self { upper, lower, argument })
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    /// Drop pairs a_i = b_j, whose gamma factors cancel identically.
    fn reduced(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lower = self.lower.clone();
        let mut upper = Vec::with_capacity(self.upper.len());
        for &a in &self.upper {
            if let Some(pos) = lower.iter().position(|&b| (a - b).abs() <= 1e-14 * a.abs().max(1.0)) {
                lower.swap_remove(pos);
            } else {
                upper.push(a);
            }
        }
        (upper, lower)
    }
}

/// Groups of lower parameters whose pairwise differences are integers.
fn degenerate_groups(lower: &[f64]) -> Vec<Vec<usize>> {
    let n = lower.len();
    let mut group = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if group[i] != usize::MAX {
            continue;
        }
        let id = groups.len();
        group[i] = id;
        let mut members = vec![i];
        for j in i + 1..n {
            let d = lower[j] - lower[i];
            if group[j] == usize::MAX && (d - d.round()).abs() < DEGENERACY_TOL {
                group[j] = id;
                members.push(j);
            }
        }
        groups.push(members);
    }
    groups.retain(|g| g.len() > 1);
    groups
}

struct ResidueSum {
    value: f64,
    /// Σ |individual terms| / |value|
    condition: f64,
    diagnostics: SeriesDiagnostics,
}

fn residue_sum(upper: &[f64], lower: &[f64], x: f64) -> Result<ResidueSum> {
    let p = upper.len();
    let q = lower.len();
    let sign_x = if (p + q) % 2 == 0 { x } else { -x };
    let ln_x = x.ln();
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut diag = SeriesDiagnostics::default();
    for (h, &bh) in lower.iter().enumerate() {
        let mut ln_coef = bh * ln_x;
        let mut sign = 1.0;
        let mut zero = false;
        for (j, &bj) in lower.iter().enumerate() {
            if j == h {
                continue;
            }
            let (l, s) = ln_gamma_signed(bj - bh)
                .map_err(|_| Error::Degenerate(format!("lower parameters {bh} and {bj} differ by an integer")))?;
            ln_coef += l;
            sign *= s;
        }
        for &a in upper {
            let (l, s) = ln_rgamma_signed(a - bh);
            if s == 0.0 {
                zero = true;
                break;
            }
            ln_coef += l;
            sign *= s;
        }
        if zero {
            continue;
        }
        let numer: Vec<f64> = upper.iter().map(|a| 1.0 + bh - a).collect();
        let denom: Vec<f64> = lower
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != h)
            .map(|(_, bj)| 1.0 + bh - bj)
            .collect();
        let (acc, _) = hyper_sum(&numer, &denom, sign_x, RESIDUE_TOL)?;
        let coef = sign * ln_coef.exp();
        if !coef.is_finite() {
            return Err(Error::Overflow(format!("residue prefactor at b = {bh} overflows")));
        }
        total += coef * acc.sum();
        abs_total += coef.abs() * acc.abs_sum();
        diag = diag.merge(acc.diagnostics());
    }
    let condition = if total == 0.0 { f64::INFINITY } else { (abs_total / total.abs()).max(1.0) };
    Ok(ResidueSum { value: total, condition, diagnostics: diag })
}

/// Residue evaluation with the ε-shift policy for degenerate lists.
fn residue_route(upper: &[f64], lower: &[f64], x: f64) -> Result<ResidueSum> {
    let groups = degenerate_groups(lower);
    if groups.is_empty() {
        return residue_sum(upper, lower, x);
    }
    let mut offsets = vec![0.0; lower.len()];
    for g in &groups {
        let mut members = g.clone();
        members.sort_by(|&i, &j| lower[i].total_cmp(&lower[j]));
        let mid = (members.len() as f64 - 1.0) / 2.0;
        for (rank, &idx) in members.iter().enumerate() {
            offsets[idx] = rank as f64 - mid;
        }
    }
    let mut worst_condition: f64 = 1.0;
    let mut diag = SeriesDiagnostics::default();
    let shifted = |eps: f64| -> Vec<f64> { lower.iter().zip(&offsets).map(|(b, o)| b + eps * o).collect() };
    let h = degenerate_shift(x);
    let value = richardson_even(h, |eps| {
        let up = residue_sum(upper, &shifted(eps), x)?;
        let down = residue_sum(upper, &shifted(-eps), x)?;
        let v = 0.5 * (up.value + down.value);
        let abs = 0.5 * (up.value.abs() * up.condition + down.value.abs() * down.condition);
        worst_condition = worst_condition.max(if v == 0.0 { f64::INFINITY } else { abs / v.abs() });
        diag = diag.merge(up.diagnostics).merge(down.diagnostics);
        Ok(v)
    })?;
    diag.degenerate_shift = h;
    // Richardson combination weights amplify rounding a little further
    Ok(ResidueSum { value, condition: worst_condition * 3.0, diagnostics: diag })
}

/// ln|Π Γ(b + c) / Π Γ(a + c)| − c ln x on the real axis; upper factors with
/// non-positive arguments are skipped.
fn real_log_integrand(upper: &[f64], lower: &[f64], ln_x: f64, c: f64) -> f64 {
    let mut v = -c * ln_x;
    for &b in lower {
        v += ln_gamma_signed(b + c).map(|(l, _)| l).unwrap_or(f64::INFINITY);
    }
    for &a in upper {
        if a + c > 0.0 {
            v -= ln_gamma_signed(a + c).map(|(l, _)| l).unwrap_or(0.0);
        }
    }
    v
}

/// Integrate the Mellin–Barnes representation along Re s = c through the
/// real saddle point.
fn contour_route(upper: &[f64], lower: &[f64], x: f64, tol: f64) -> Result<EvalResult> {
    let ln_x = x.ln();
    let c_min = -lower.iter().copied().fold(f64::INFINITY, f64::min);
    let span = (q_minus_p(upper, lower) as f64).recip();
    let mut lo = c_min + 0.25;
    let mut hi = c_min + 10.0 + 3.0 * x.powf(span);
    let phi = |c: f64| real_log_integrand(upper, lower, ln_x, c);
    // golden-section search for the minimum of the real log-integrand
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c1 = hi - g * (hi - lo);
    let mut c2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (phi(c1), phi(c2));
    for _ in 0..200 {
        if (hi - lo) < 1e-6 * (1.0 + hi.abs()) {
            break;
        }
        if f1 < f2 {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - g * (hi - lo);
            f1 = phi(c1);
        } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + g * (hi - lo);
            f2 = phi(c2);
        }
    }
    let c = 0.5 * (lo + hi);
    let scale_ln = phi(c);
    let ln_xc = Complex64::new(ln_x, 0.0);
    let integrand = move |t: f64| -> f64 {
        let s = Complex64::new(c, t);
        let mut l = -s * ln_xc - scale_ln;
        for &b in lower {
            l += ln_gamma_complex(s + b);
        }
        for &a in upper {
            l -= ln_gamma_complex(s + a);
        }
        if l.re < -745.0 {
            return 0.0;
        }
        l.exp().re
    };
    let req = QuadratureRequest::semi_infinite(integrand, 0.0).rel_tol((tol * 1e-2).clamp(1e-13, 1e-6));
    let res = integrate(&req)?;
    if !res.converged {
        return Err(Error::convergence(
            "Mellin-Barnes contour quadrature did not converge",
            SeriesDiagnostics::new(res.evaluations, res.error_estimate),
        ));
    }
    let factor = scale_ln.exp() / PI;
    let value = res.value * factor;
    Ok(EvalResult {
        value,
        error_estimate: res.error_estimate * factor.abs(),
        method: Method::Hybrid,
        diagnostics: SeriesDiagnostics::new(res.evaluations, 0.0),
        notes: vec![format!("Mellin-Barnes contour quadrature on Re s = {c:.6}")],
    })
}

fn q_minus_p(upper: &[f64], lower: &[f64]) -> usize {
    lower.len() - upper.len()
}

/// Evaluate G^{q,0}_{p,q}(x | a; b) to relative accuracy ~`tol`.
pub fn meijer_g(spec: &MeijerGSpec, tol: f64) -> Result<EvalResult> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let (upper, lower) = spec.reduced();
    let x = spec.argument;
    let target = tol.max(1e-15);
    match residue_route(&upper, &lower, x) {
        Ok(r) if r.value.is_finite() && r.condition * 1e-15 <= 0.1 * target => {
            let err = r.condition * 4.0 * f64::EPSILON * r.value.abs()
                + if r.diagnostics.degenerate_shift > 0.0 { 1e-12 * r.value.abs() } else { 0.0 };
            let mut out = EvalResult::closed_form(r.value, err, r.diagnostics);
            if r.diagnostics.degenerate_shift > 0.0 {
                out = out.with_note(format!(
                    "degenerate lower parameters: symmetric shift h = {:.1e} with Richardson extrapolation",
                    r.diagnostics.degenerate_shift
                ));
            }
            Ok(out)
        }
        Ok(r) => contour_route(&upper, &lower, x, tol).map(|e| {
            e.with_note(format!("residue series cancellation {:.1e} too large", r.condition))
        }),
        Err(Error::Convergence { .. }) | Err(Error::Overflow(_)) => contour_route(&upper, &lower, x, tol)
            .map(|e| e.with_note("residue series failed to converge")),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn g(upper: &[f64], lower: &[f64], x: f64) -> EvalResult {
        meijer_g(&MeijerGSpec::new(upper.to_vec(), lower.to_vec(), x).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(MeijerGSpec::new(vec![1.0], vec![0.0], 1.0).is_err());
        assert!(MeijerGSpec::new(vec![], vec![0.0], 0.0).is_err());
        assert!(MeijerGSpec::new(vec![], vec![0.0], -1.0).is_err());
    }

    #[test]
    fn single_gamma_is_exponential() {
        for &x in &[0.1, 1.0, 5.0, 30.0] {
            let v = g(&[], &[0.0], x);
            assert!(rel(v.value, (-x).exp()) < 1e-10, "x = {x}: {v:?}");
        }
        // x^b e^{-x}
        let v = g(&[], &[0.7], 2.0);
        assert!(rel(v.value, 2f64.powf(0.7) * (-2f64).exp()) < 1e-13);
    }

    #[test]
    fn half_integer_pair_is_exponential_of_root() {
        // G^{2,0}_{0,2}(x | 0, 1/2) = √π e^{-2√x}
        for &x in &[0.3, 2.0, 40.0] {
            let v = g(&[], &[0.0, 0.5], x);
            let want = PI.sqrt() * (-2.0 * x.sqrt()).exp();
            assert!(rel(v.value, want) < 1e-11, "x = {x}: {v:?}");
        }
    }

    #[test]
    fn upper_parameter_cancels_matching_lower() {
        let a = g(&[0.3], &[0.3, 0.0], 1.5).value;
        assert!(rel(a, (-1.5f64).exp()) < 1e-14);
    }

    #[test]
    fn degenerate_groups_detects_integer_differences() {
        let groups = degenerate_groups(&[0.0, 0.5, 1.0, 1.5, 0.25]);
        assert_eq!(groups, vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn contour_matches_residues() {
        let upper = [1.4];
        let lower = [0.0, 0.3, 0.65];
        for &x in &[0.5, 3.0] {
            let r = residue_sum(&upper, &lower, x).unwrap().value;
            let c = contour_route(&upper, &lower, x, 1e-12).unwrap().value;
            assert!(rel(c, r) < 1e-10, "x = {x}: {c} vs {r}");
        }
    }
}
