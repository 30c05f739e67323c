//! Thermonuclear reaction-rate integrals in Meijer G-function form.
//!
//! Every operation returns a [`DualResult`]: the G-function closed form and
//! an independent quadrature of the defining integral. With ρ = n/m:
//!
//! * `a_r`: A_r = ∫₀^∞ p e^{−py} y^{−nr} e^{−z y^{−ρ}} dy
//! * `n1`: N₁ = ∫₀^∞ e^{−ay} y^v e^{−z y^{−ρ}} dy
//! * `n2`: N₂ = ∫₀^d e^{−ay} y^v e^{−z y^{−ρ}} dy
//! * `screened_rate`: ∫₀^∞ e^{−ay} y^v e^{−z (y+t)^{−ρ}} dy
//! * `resonant_rate`: N₃ = ∫₀^∞ t^v e^{−at − q t^{−ρ}} / ((b−t)² + g²) dt

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{DualResult, EvalResult, Method, SeriesDiagnostics};
use crate::quadrature::{integrate, integrate_2d, QuadratureRequest, QuadratureResult, ORACLE_REL_TOL};
use crate::specfun::gamma::{binomial, log_gamma};
use crate::specfun::{gamma, meijer_g, MeijerGSpec, SeriesAccumulator};

/// Stop tolerance for the resonant g⁻² expansion.
pub const SERIES_TOL: f64 = 1e-8;
/// Accuracy requested from each G evaluation. The screened-rate
/// combinations cancel several digits, so this is much tighter than the
/// accuracy of the final rate.
const G_TOL: f64 = 1e-13;
/// Stop tolerance for the factorially convergent N₂ outer series.
const N2_TOL: f64 = 1e-16;
/// Largest rounding amplification accepted from the N₂ outer series.
const N2_MAX_CONDITION: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    /// Boltzmann scale of A_r.
    pub p: f64,
    /// Exponential scale of N₁, N₂, N₃ and the screened rate.
    pub a: f64,
    /// Screening / barrier strength (q of the resonant rate).
    pub z: f64,
    pub n: u32,
    pub m: u32,
    /// Power index of A_r (may be any real, e.g. −ν for the collision integral).
    pub r: f64,
    pub v: u32,
    /// Shift of the screened rate.
    pub t: f64,
    /// Upper limit of N₂.
    pub d: f64,
    /// Resonance centre.
    pub b: f64,
    /// Resonance width.
    pub g: f64,
}

impl Default for RateParams {
    fn default() -> Self {
        Self { p: 1.0, a: 1.0, z: 1.0, n: 1, m: 1, r: 0.0, v: 0, t: 1.0, d: 1.0, b: 0.0, g: 1.0 }
    }
}

impl RateParams {
    fn rho(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    fn check(&self, positive: &[(&str, f64)], allow_zero_z: bool) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::invalid(format!("n and m must be >= 1, got n = {}, m = {}", self.n, self.m)));
        }
        for &(name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        let z_ok = if allow_zero_z { self.z >= 0.0 } else { self.z > 0.0 };
        if !(z_ok && self.z.is_finite()) {
            return Err(Error::invalid(format!("z must be {} 0, got {}", if allow_zero_z { ">=" } else { ">" }, self.z)));
        }
        Ok(())
    }
}

fn ln_arg(z: f64, scale: f64, n: u32, m: u32) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    mf * z.ln() + nf * scale.ln() - mf * mf.ln() - nf * nf.ln()
}

fn g_eval(upper: Vec<f64>, lower: Vec<f64>, ln_x: f64) -> Result<EvalResult> {
    let x = ln_x.exp();
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Overflow(format!("G-function argument e^{ln_x:.3} out of range")));
    }
    meijer_g(&MeijerGSpec::new(upper, lower, x)?, G_TOL)
}

fn oracle_semi_infinite(f: impl Fn(f64) -> f64 + Send + Sync, breakpoints: &[f64]) -> Result<QuadratureResult> {
    let mut req = QuadratureRequest::semi_infinite(f, 0.0).rel_tol(ORACLE_REL_TOL);
    for &b in breakpoints {
        if b > 0.0 {
            req = req.breakpoint(b);
        }
    }
    integrate(&req)
}

fn dual(closed: Result<EvalResult>, oracle: QuadratureResult) -> DualResult {
    match closed {
        Ok(c) => DualResult::new(c, oracle),
        Err(e) => DualResult::oracle_only(oracle, format!("closed form unavailable: {e}")),
    }
}

/// Closed form of A_r.
fn a_r_closed(p: f64, z: f64, n: u32, m: u32, r: f64) -> Result<EvalResult> {
    let (nf, mf) = (n as f64, m as f64);
    let nr = nf * r;
    if z == 0.0 {
        if nr >= 1.0 {
            return Err(Error::domain(format!("unscreened A_r diverges for n·r = {nr} >= 1")));
        }
        return Ok(EvalResult::exact(p.powf(nr) * gamma(1.0 - nr)?));
    }
    let prefactor = p.powf(nr) * (2.0 * PI).powf((2.0 - nf - mf) / 2.0) * mf.sqrt() * nf.powf((1.0 - 2.0 * nr) / 2.0);
    let lower: Vec<f64> = (0..m)
        .map(|j| j as f64 / mf)
        .chain((0..n).map(|j| (1.0 - nr + j as f64) / nf))
        .collect();
    Ok(g_eval(vec![], lower, ln_arg(z, p, n, m))?.scaled(prefactor))
}

/// Collision probability integral of the protected beam,
/// A(ν, z) = ∫₀^∞ y^ν e^{−y − z y^{−1/2}} dy, i.e. A_r with p = 1, n = 1, m = 2, r = −ν.
pub fn collision_a(nu: f64, z: f64) -> Result<DualResult> {
    if !(nu > -1.0) {
        return Err(Error::invalid(format!("nu must exceed -1, got {nu}")));
    }
    a_r(&RateParams { p: 1.0, z, n: 1, m: 2, r: -nu, ..RateParams::default() })
}

pub fn a_r(params: &RateParams) -> Result<DualResult> {
    params.check(&[("p", params.p)], true)?;
    let RateParams { p, z, n, m, r, .. } = *params;
    let nr = n as f64 * r;
    if z == 0.0 && nr >= 1.0 {
        return Err(Error::domain(format!("A_r diverges without screening for n·r = {nr} >= 1")));
    }
    let rho = params.rho();
    let oracle = oracle_semi_infinite(
        move |y: f64| {
            let screen = if z == 0.0 { 0.0 } else { z * y.powf(-rho) };
            (p.ln() - p * y - nr * y.ln() - screen).exp()
        },
        &[],
    )?;
    Ok(dual(a_r_closed(p, z, n, m, r), oracle))
}

/// Closed form of N₁ for real v ≥ 0.
fn n1_closed(a: f64, z: f64, n: u32, m: u32, v: f64) -> Result<EvalResult> {
    if z == 0.0 {
        return Ok(EvalResult::exact((log_gamma(v + 1.0)? - (v + 1.0) * a.ln()).exp()));
    }
    let (nf, mf) = (n as f64, m as f64);
    let ln_pref = -(v + 1.0) * a.ln() + (2.0 - mf - nf) / 2.0 * (2.0 * PI).ln() + 0.5 * mf.ln() + (v + 0.5) * nf.ln();
    let lower: Vec<f64> = (0..m)
        .map(|j| j as f64 / mf)
        .chain((1..=n).map(|j| (v + j as f64) / nf))
        .collect();
    Ok(g_eval(vec![], lower, ln_arg(z, a, n, m))?.scaled(ln_pref.exp()))
}

fn power_integrand(a: f64, z: f64, v: f64, rho: f64) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    move |y: f64| {
        if y == 0.0 {
            return if z > 0.0 || v > 0.0 { 0.0 } else { 1.0 };
        }
        let screen = if z == 0.0 { 0.0 } else { z * y.powf(-rho) };
        (-a * y + v * y.ln() - screen).exp()
    }
}

pub fn n1(params: &RateParams) -> Result<DualResult> {
    params.check(&[("a", params.a)], true)?;
    let RateParams { a, z, n, m, v, .. } = *params;
    let oracle = oracle_semi_infinite(power_integrand(a, z, v as f64, params.rho()), &[])?;
    Ok(dual(n1_closed(a, z, n, m, v as f64), oracle))
}

/// J(μ, ζ) = ∫₀¹ w^μ e^{−ζ w^{−n/m}} dw as a G^{m+n,0}_{n,m+n}.
fn truncated_unit(mu: f64, zeta: f64, n: u32, m: u32) -> Result<EvalResult> {
    if zeta == 0.0 {
        return Ok(EvalResult::exact(1.0 / (mu + 1.0)));
    }
    let (nf, mf) = (n as f64, m as f64);
    let upper: Vec<f64> = (0..n).map(|j| (mu + 2.0 + j as f64) / nf).collect();
    let lower: Vec<f64> = (0..m)
        .map(|j| j as f64 / mf)
        .chain((0..n).map(|j| (mu + 1.0 + j as f64) / nf))
        .collect();
    let prefactor = (2.0 * PI).powf((1.0 - mf) / 2.0) * mf.sqrt() / nf;
    let ln_x = mf * zeta.ln() - mf * mf.ln();
    Ok(g_eval(upper, lower, ln_x)?.scaled(prefactor))
}

/// Closed form of N₂: d^{v+1} Σ_r (−ad)^r/r! J(v + r, z d^{−n/m}).
fn n2_closed(a: f64, z: f64, d: f64, n: u32, m: u32, v: f64) -> Result<EvalResult> {
    let zeta = if z == 0.0 { 0.0 } else { z * d.powf(-(n as f64) / m as f64) };
    let x = -a * d;
    let mut acc = SeriesAccumulator::new(N2_TOL);
    let mut coeff = 1.0;
    let mut err = 0.0;
    let mut diag = SeriesDiagnostics::default();
    let mut notes = Vec::new();
    let mut r = 0usize;
    loop {
        let j = truncated_unit(v + r as f64, zeta, n, m)?;
        let term = coeff * j.value;
        err += (coeff * j.error_estimate).abs();
        diag = diag.merge(j.diagnostics);
        for note in j.notes {
            if !notes.contains(&note) {
                notes.push(note);
            }
        }
        // J decreases in μ, so terms past the peak of |x|^r/r! only shrink
        let done = acc.push(term) && (r as f64) > x.abs();
        if done {
            break;
        }
        r += 1;
        if acc.exhausted() {
            return Err(acc.not_converged("N2 outer series"));
        }
        coeff *= x / r as f64;
    }
    if acc.condition() > N2_MAX_CONDITION {
        return Err(Error::convergence(
            format!("N2 outer series cancels ({:.1e}) for a·d = {}", acc.condition(), -x),
            acc.diagnostics(),
        ));
    }
    let scale = d.powf(v + 1.0);
    diag.terms_used = acc.terms();
    diag.truncation_estimate = acc.diagnostics().truncation_estimate;
    let method = if notes.iter().any(|n| n.contains("contour")) { Method::Hybrid } else { Method::ClosedForm };
    Ok(EvalResult {
        value: acc.sum() * scale,
        error_estimate: (acc.error_estimate() + err) * scale,
        method,
        diagnostics: diag,
        notes,
    })
}

pub fn n2(params: &RateParams) -> Result<DualResult> {
    params.check(&[("a", params.a), ("d", params.d)], true)?;
    let RateParams { a, z, d, n, m, v, .. } = *params;
    let oracle = integrate(
        &QuadratureRequest::finite(power_integrand(a, z, v as f64, params.rho()), 0.0, d).rel_tol(ORACLE_REL_TOL),
    )?;
    Ok(dual(n2_closed(a, z, d, n, m, v as f64), oracle))
}

/// Closed form of the screened rate by the finite binomial combination
/// t^{v+1} e^{at} Σ_r C(v,r)(−1)^r [N₁(z₁; at, v−r) − N₂(z₁; 1, at, v−r)]
/// with z₁ = z·t^{−n/m}.
fn screened_closed(a: f64, z: f64, t: f64, n: u32, m: u32, v: u32) -> Result<EvalResult> {
    if z == 0.0 {
        return Ok(EvalResult::exact((log_gamma(v as f64 + 1.0)? - (v as f64 + 1.0) * a.ln()).exp()));
    }
    let a1 = a * t;
    let z1 = z * t.powf(-(n as f64) / m as f64);
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut diag = SeriesDiagnostics::default();
    let mut method = Method::ClosedForm;
    let mut notes: Vec<String> = Vec::new();
    for r in 0..=v {
        let mu = (v - r) as f64;
        let full = n1_closed(a1, z1, n, m, mu)
            .map_err(|e| Error::convergence(format!("N1 term r = {r}: {e}"), SeriesDiagnostics::default()))?;
        let part = n2_closed(a1, z1, 1.0, n, m, mu)
            .map_err(|e| Error::convergence(format!("N2 term r = {r}: {e}"), SeriesDiagnostics::default()))?;
        let c = binomial(v, r) * if r % 2 == 0 { 1.0 } else { -1.0 };
        sum += c * (full.value - part.value);
        err += c.abs() * (full.error_estimate + part.error_estimate);
        diag = diag.merge(full.diagnostics).merge(part.diagnostics);
        for res in [&full, &part] {
            if res.method == Method::Hybrid {
                method = Method::Hybrid;
            }
            for note in &res.notes {
                if !notes.contains(note) {
                    notes.push(note.clone());
                }
            }
        }
    }
    let scale = (a1 + (v as f64 + 1.0) * t.ln()).exp();
    Ok(EvalResult { value: sum * scale, error_estimate: err * scale, method, diagnostics: diag, notes })
}

pub fn screened_rate(params: &RateParams) -> Result<DualResult> {
    params.check(&[("a", params.a), ("t", params.t)], true)?;
    let RateParams { a, z, t, n, m, v, .. } = *params;
    let rho = params.rho();
    let vf = v as f64;
    let oracle = oracle_semi_infinite(
        move |y: f64| {
            let power = if v == 0 { 0.0 } else { vf * y.ln() };
            (-a * y + power - z * (y + t).powf(-rho)).exp()
        },
        &[],
    )?;
    Ok(dual(screened_closed(a, z, t, n, m, v), oracle))
}

fn resonant_integrand(params: &RateParams) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    let RateParams { a, z: q, b, g, v, .. } = *params;
    let base = power_integrand(a, q, v as f64, params.rho());
    move |t: f64| base(t) / ((b - t) * (b - t) + g * g)
}

fn resonant_breakpoints(b: f64, g: f64) -> Vec<f64> {
    [b - g, b, b + g].into_iter().filter(|&x| x > 0.0).collect()
}

/// 2D route via 1/((b−t)² + g²) = ∫₀^∞ e^{−[(b−t)² + g²]x} dx, with
/// the outer integral over x and the inner over t.
pub fn resonant_rate_2d(params: &RateParams) -> Result<QuadratureResult> {
    params.check(&[("a", params.a), ("g", params.g)], true)?;
    let RateParams { a, z: q, b, g, v, .. } = *params;
    let base = power_integrand(a, q, v as f64, params.rho());
    let outer = QuadratureRequest::semi_infinite(move |x: f64| (-g * g * x).exp(), 0.0).rel_tol(1e-8);
    integrate_2d(outer, move |x: f64| {
        let mut req = QuadratureRequest::semi_infinite(move |t: f64| base(t) * (-(b - t) * (b - t) * x).exp(), 0.0);
        if b > 0.0 {
            req = req.breakpoint(b);
        }
        req
    })
}

enum ResonantSeries {
    Converged(EvalResult),
    Diverged(String),
}

/// Resonant g⁻² double series
/// Σ_k (−1)^k g^{−2k−2} Σ_{k₁} C(2k, k₁)(−1)^{k₁} b^{2k−k₁} N₁(q; a, v + k₁).
fn resonant_series(params: &RateParams, max_k: usize) -> Result<ResonantSeries> {
    let RateParams { a, z: q, n, m, v, b, g, .. } = *params;
    let mut n1_cache: Vec<EvalResult> = Vec::new();
    let mut acc = SeriesAccumulator::new(SERIES_TOL);
    let mut growing = 0usize;
    let mut last = f64::INFINITY;
    let mut diag = SeriesDiagnostics::default();
    let mut method = Method::ClosedForm;
    let mut contour_terms = 0usize;
    let mut err = 0.0;
    let contour_note = |count: usize, total: usize| {
        (count > 0).then(|| format!("{count} of {total} N1 terms evaluated by Mellin-Barnes contour quadrature"))
    };
    for k in 0..=max_k {
        while n1_cache.len() <= 2 * k {
            let r = n1_closed(a, q, n, m, v as f64 + n1_cache.len() as f64)?;
            if r.method == Method::Hybrid {
                method = Method::Hybrid;
                contour_terms += 1;
            }
            diag = diag.merge(r.diagnostics);
            n1_cache.push(r);
        }
        let mut inner = 0.0;
        for (k1, n1v) in n1_cache.iter().enumerate().take(2 * k + 1) {
            let c = binomial(2 * k as u32, k1 as u32) * b.powi((2 * k - k1) as i32) * if k1 % 2 == 0 { 1.0 } else { -1.0 };
            inner += c * n1v.value;
            err += (c * n1v.error_estimate).abs() * g.powi(-(2 * k as i32) - 2);
        }
        let term = if k % 2 == 0 { 1.0 } else { -1.0 } * inner * g.powi(-(2 * k as i32) - 2);
        if !term.is_finite() {
            return Ok(ResonantSeries::Diverged(format!("term k = {k} overflowed")));
        }
        if term.abs() > last {
            growing += 1;
            if growing >= 3 {
                return Ok(ResonantSeries::Diverged(format!(
                    "g^-2 expansion diverges: |term| grew for 3 consecutive k up to k = {k} (b^2 = {}, g^2 = {})",
                    b * b,
                    g * g
                )));
            }
        } else {
            growing = 0;
        }
        last = term.abs();
        if acc.push(term) {
            diag.terms_used = acc.terms();
            diag.truncation_estimate = term.abs();
            return Ok(ResonantSeries::Converged(EvalResult {
                value: acc.sum(),
                error_estimate: acc.error_estimate() + err,
                method,
                diagnostics: diag,
                notes: contour_note(contour_terms, n1_cache.len()).into_iter().collect(),
            }));
        }
    }
    diag.terms_used = acc.terms();
    diag.truncation_estimate = last;
    let notes = contour_note(contour_terms, n1_cache.len()).into_iter().collect();
    let out = EvalResult { value: acc.sum(), error_estimate: acc.error_estimate() + err, method, diagnostics: diag, notes }
        .with_note(format!("truncated at max_k = {max_k} before the stop rule fired"));
    Ok(ResonantSeries::Converged(out))
}

pub fn resonant_rate(params: &RateParams, max_k: usize) -> Result<DualResult> {
    params.check(&[("a", params.a), ("g", params.g)], true)?;
    let oracle = oracle_semi_infinite(resonant_integrand(params), &resonant_breakpoints(params.b, params.g))?;
    Ok(match resonant_series(params, max_k) {
        Ok(ResonantSeries::Converged(c)) => DualResult::new(c, oracle),
        Ok(ResonantSeries::Diverged(why)) => DualResult::oracle_only(oracle, why),
        Err(e) => DualResult::oracle_only(oracle, format!("closed form unavailable: {e}")),
    })
}

/// Which rate integral to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateKind {
    /// A(ν, z) of the screened collision probability; ν is carried as r = −ν.
    Collision,
    /// A_r, the general screened power integral.
    Ar,
    /// N₁, the non-resonant rate.
    Nonresonant,
    /// N₂, the non-resonant rate with a high-energy cut-off d.
    Truncated,
    Screened,
    Resonant,
}

impl RateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RateKind::Collision => "collision",
            RateKind::Ar => "ar",
            RateKind::Nonresonant => "nonresonant",
            RateKind::Truncated => "truncated",
            RateKind::Screened => "screened",
            RateKind::Resonant => "resonant",
        }
    }
}

impl RateParams {
    /// Check the invariants `kind` relies on without evaluating anything.
    pub fn validate(&self, kind: RateKind) -> Result<()> {
        match kind {
            RateKind::Collision => {
                if !(-self.r > -1.0) {
                    return Err(Error::invalid(format!("nu must exceed -1, got {}", -self.r)));
                }
                self.check(&[], true)
            }
            RateKind::Ar => {
                self.check(&[("p", self.p)], true)?;
                let nr = self.n as f64 * self.r;
                if self.z == 0.0 && nr >= 1.0 {
                    return Err(Error::domain(format!("A_r diverges without screening for n·r = {nr} >= 1")));
                }
                Ok(())
            }
            RateKind::Nonresonant => self.check(&[("a", self.a)], true),
            RateKind::Truncated => self.check(&[("a", self.a), ("d", self.d)], true),
            RateKind::Screened => self.check(&[("a", self.a), ("t", self.t)], true),
            RateKind::Resonant => self.check(&[("a", self.a), ("g", self.g)], true),
        }
    }
}

/// Evaluate one rate integral; `max_k` only affects the resonant series.
pub fn evaluate(kind: RateKind, params: &RateParams, max_k: usize) -> Result<DualResult> {
    params.validate(kind)?;
    match kind {
        RateKind::Collision => collision_a(-params.r, params.z),
        RateKind::Ar => a_r(params),
        RateKind::Nonresonant => n1(params),
        RateKind::Truncated => n2(params),
        RateKind::Screened => screened_rate(params),
        RateKind::Resonant => resonant_rate(params, max_k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(d: &DualResult, tol: f64) {
        assert!(d.agreement.is_some_and(|a| a < tol), "{d:?}");
    }

    #[test]
    fn unscreened_limits() {
        let p = RateParams { z: 0.0, a: 2.0, v: 3, ..RateParams::default() };
        let want = 6.0 / 16.0;
        for d in [n1(&p).unwrap(), screened_rate(&p).unwrap()] {
            assert!((d.value() - want).abs() < 1e-14, "{d:?}");
            check(&d, 1e-9);
        }
        check(&a_r(&RateParams { z: 0.0, p: 1.5, ..RateParams::default() }).unwrap(), 1e-9);
    }

    #[test]
    fn n1_matches_quadrature() {
        for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)] {
            for v in [0, 1, 3] {
                let p = RateParams { a: 1.3, z: 0.8, n, m, v, ..RateParams::default() };
                check(&n1(&p).unwrap(), 1e-8);
            }
        }
    }

    #[test]
    fn n2_matches_quadrature() {
        for (n, m) in [(1, 1), (1, 2), (2, 1), (3, 2)] {
            for v in [0, 2] {
                let p = RateParams { a: 1.0, z: 0.5, d: 1.0, n, m, v, ..RateParams::default() };
                check(&n2(&p).unwrap(), 1e-9);
            }
        }
    }

    #[test]
    fn screened_matches_quadrature() {
        for (n, m) in [(1, 1), (1, 2), (2, 3)] {
            let p = RateParams { a: 1.0, t: 0.5, z: 1.0, n, m, v: 1, ..RateParams::default() };
            check(&screened_rate(&p).unwrap(), 1e-7);
        }
    }

    #[test]
    fn resonant_leading_term() {
        let p = RateParams { a: 1.0, z: 0.5, n: 1, m: 2, b: 0.0, g: 3.0, ..RateParams::default() };
        let lead = resonant_rate(&p, 0).unwrap();
        let ar = a_r(&RateParams { p: 1.0, z: 0.5, n: 1, m: 2, ..RateParams::default() }).unwrap();
        assert!((lead.value() - ar.value() / 9.0).abs() < 1e-12 * ar.value());
    }
}
