//! Polytrope-free stellar models with analytic density profiles.
//!
//! All three profiles are members of ρ(x) = ρ_c(1 − x^δ)^γ with x = r/R:
//! Linear is (1, 1), PowerLaw(δ) is (δ, 1). Every quantity is in cgs units.

mod model;
mod two_param;

use std::f64::consts::PI;

pub use model::{PhysicalConstants, Profile, ProfilePoint, StellarModel, CGS};
use two_param::TwoParamPressure;

use crate::error::{Error, Result};
use crate::eval::{DualResult, EvalResult, Method};
use crate::quadrature::{integrate, QuadratureRequest, FALLBACK_REL_TOL, ORACLE_REL_TOL};
use crate::specfun::{beta, gauss_2f1, lauricella_fd, pochhammer};

fn check_x(x: f64, allow_surface: bool) -> Result<()> {
    let ok = if allow_surface { (0.0..=1.0).contains(&x) } else { (0.0..1.0).contains(&x) };
    if ok {
        Ok(())
    } else if !allow_surface && x == 1.0 {
        Err(Error::domain(
            "T and ε have a removable 0/0 at the surface x = 1; the limiting value there is 0",
        ))
    } else {
        Err(Error::domain(format!("fractional radius must lie in [0, 1], got {x}")))
    }
}

/// ψ = 1/2 − (δ+6)/((δ+2)(δ+3)) + 3/(2(δ+1)(δ+3)), the central pressure of
/// the power-law profile in units of (4π/3)Gρ_c²R².
pub fn psi(delta: f64) -> f64 {
    let (a, b) = power_law_coefficients(delta);
    0.5 - a + b
}

fn power_law_coefficients(delta: f64) -> (f64, f64) {
    let a = (delta + 6.0) / ((delta + 2.0) * (delta + 3.0));
    let b = 3.0 / (2.0 * (delta + 1.0) * (delta + 3.0));
    (a, b)
}

pub fn density(model: &StellarModel, x: f64) -> Result<f64> {
    model.validate()?;
    check_x(x, true)?;
    Ok(density_unchecked(model, x))
}

fn density_unchecked(model: &StellarModel, x: f64) -> f64 {
    match model.profile {
        Profile::Linear => model.rho_c * (1.0 - x),
        Profile::PowerLaw { delta } => model.rho_c * (1.0 - x.powf(delta)),
        Profile::TwoParameter { delta, gamma } => model.rho_c * (1.0 - x.powf(delta)).max(0.0).powf(gamma),
    }
}

/// Quadrature of 4π∫₀^{xR} t²ρ(t) dt.
pub fn mass_oracle(model: &StellarModel, x: f64, rel_tol: f64) -> Result<crate::quadrature::QuadratureResult> {
    model.validate()?;
    check_x(x, true)?;
    let scale = 4.0 * PI * model.radius.powi(3);
    if x == 0.0 {
        return Ok(crate::quadrature::QuadratureResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true });
    }
    let m = *model;
    let mut r = integrate(&QuadratureRequest::finite(move |t: f64| t * t * density_unchecked(&m, t), 0.0, x).rel_tol(rel_tol))?;
    r.value *= scale;
    r.error_estimate *= scale;
    Ok(r)
}

/// Enclosed mass M(xR) in grams.
pub fn mass(model: &StellarModel, x: f64) -> Result<EvalResult> {
    model.validate()?;
    check_x(x, true)?;
    let sphere = 4.0 * PI / 3.0 * model.rho_c * (x * model.radius).powi(3);
    match model.profile {
        Profile::Linear => Ok(EvalResult::exact(sphere * (1.0 - 0.75 * x))),
        Profile::PowerLaw { delta } => Ok(EvalResult::exact(sphere * (1.0 - 3.0 / (delta + 3.0) * x.powf(delta)))),
        Profile::TwoParameter { delta, gamma } => {
            let s = 3.0 / delta;
            match gauss_2f1(-gamma, s, s + 1.0, x.powf(delta)) {
                Ok(f) => Ok(f.scaled(sphere)),
                Err(e) => {
                    let q = mass_oracle(model, x, FALLBACK_REL_TOL)?;
                    Ok(EvalResult {
                        value: q.value,
                        error_estimate: q.error_estimate,
                        method: Method::Oracle,
                        diagnostics: crate::eval::SeriesDiagnostics::new(q.evaluations, 0.0),
                        notes: vec![format!("2F1 mass factor failed ({e}); quadrature used")],
                    })
                }
            }
        }
    }
}

/// Pressure evaluator with per-model precomputation.
enum PressureKernel {
    Linear,
    PowerLaw { delta: f64 },
    TwoParameter(TwoParamPressure),
}

impl PressureKernel {
    fn new(profile: Profile) -> Result<Self> {
        Ok(match profile {
            Profile::Linear => PressureKernel::Linear,
            Profile::PowerLaw { delta } => PressureKernel::PowerLaw { delta },
            Profile::TwoParameter { delta, gamma } => PressureKernel::TwoParameter(TwoParamPressure::new(delta, gamma)?),
        })
    }

    /// P / (4πGρ_c²R²).
    fn reduced(&self, x: f64) -> Result<EvalResult> {
        match self {
            PressureKernel::Linear => {
                let x2 = x * x;
                let poly = 5.0 - 24.0 * x2 + 28.0 * x2 * x - 9.0 * x2 * x2;
                Ok(EvalResult::exact(poly / 144.0))
            }
            PressureKernel::PowerLaw { delta } => {
                let (a, b) = power_law_coefficients(*delta);
                let xd = x.powf(*delta);
                let x2 = x * x;
                let v = psi(*delta) - x2 / 2.0 + a * x2 * xd - b * x2 * xd * xd;
                Ok(EvalResult::exact(v / 3.0))
            }
            PressureKernel::TwoParameter(p) => p.reduced(x),
        }
    }
}

struct PressureEvaluator {
    model: StellarModel,
    consts: PhysicalConstants,
    kernel: PressureKernel,
}

impl PressureEvaluator {
    fn new(model: &StellarModel, consts: &PhysicalConstants) -> Result<Self> {
        model.validate()?;
        Ok(Self { model: *model, consts: *consts, kernel: PressureKernel::new(model.profile)? })
    }

    fn scale(&self) -> f64 {
        4.0 * PI * self.consts.gravitational * self.model.rho_c.powi(2) * self.model.radius.powi(2)
    }

    fn at(&self, x: f64) -> Result<EvalResult> {
        if x == 1.0 {
            return Ok(EvalResult::exact(0.0));
        }
        match self.kernel.reduced(x) {
            Ok(r) => Ok(r.scaled(self.scale())),
            Err(e) => {
                let q = hydrostatic_oracle(&self.model, &self.consts, x, FALLBACK_REL_TOL)?;
                Ok(EvalResult {
                    value: q.value,
                    error_estimate: q.error_estimate,
                    method: Method::Oracle,
                    diagnostics: crate::eval::SeriesDiagnostics::new(q.evaluations, 0.0),
                    notes: vec![format!("pressure series failed ({e}); hydrostatic quadrature used")],
                })
            }
        }
    }
}

/// Quadrature of the hydrostatic integral G∫_r^R M(s)ρ(s)/s² ds.
pub fn hydrostatic_oracle(
    model: &StellarModel,
    consts: &PhysicalConstants,
    x: f64,
    rel_tol: f64,
) -> Result<crate::quadrature::QuadratureResult> {
    model.validate()?;
    check_x(x, true)?;
    if x == 1.0 {
        return Ok(crate::quadrature::QuadratureResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true });
    }
    let m = *model;
    let g = consts.gravitational;
    let integrand = move |s: f64| {
        let enclosed = mass(&m, s).map(|r| r.value).unwrap_or(f64::NAN);
        g * enclosed * density_unchecked(&m, s) / (s * s * m.radius)
    };
    integrate(&QuadratureRequest::finite(integrand, x, 1.0).rel_tol(rel_tol))
}

/// Pressure in dyn cm⁻²; P(1) = 0 exactly.
pub fn pressure(model: &StellarModel, x: f64, consts: &PhysicalConstants) -> Result<EvalResult> {
    check_x(x, true)?;
    PressureEvaluator::new(model, consts)?.at(x)
}

fn ideal_gas_factor(model: &StellarModel, consts: &PhysicalConstants) -> f64 {
    consts.atomic_mass_unit * model.mu / consts.boltzmann
}

/// 5 + 5x − 19x² + 9x³ = (5 − 24x² + 28x³ − 9x⁴)/(1 − x).
pub fn linear_temperature_polynomial(x: f64) -> f64 {
    5.0 + x * (5.0 + x * (-19.0 + 9.0 * x))
}

struct TemperatureEvaluator {
    pressure: PressureEvaluator,
}

impl TemperatureEvaluator {
    fn new(model: &StellarModel, consts: &PhysicalConstants) -> Result<Self> {
        Ok(Self { pressure: PressureEvaluator::new(model, consts)? })
    }

    fn at(&self, x: f64) -> Result<EvalResult> {
        let model = &self.pressure.model;
        let consts = &self.pressure.consts;
        let k = ideal_gas_factor(model, consts);
        if let Profile::Linear = model.profile {
            let scale = PI * consts.gravitational * model.rho_c * model.radius.powi(2) / 36.0;
            return Ok(EvalResult::exact(k * scale * linear_temperature_polynomial(x)));
        }
        let p = self.pressure.at(x)?;
        let rho = density_unchecked(model, x);
        Ok(p.scaled(k / rho))
    }

    /// T at x ∈ [0, 1] with the surface limit T(1) = 0.
    fn with_limit(&self, x: f64) -> Result<f64> {
        if x >= 1.0 {
            Ok(0.0)
        } else {
            Ok(self.at(x)?.value)
        }
    }
}

/// Temperature in K from the ideal-gas law; undefined (0/0) at x = 1.
pub fn temperature(model: &StellarModel, x: f64, consts: &PhysicalConstants) -> Result<EvalResult> {
    check_x(x, false)?;
    TemperatureEvaluator::new(model, consts)?.at(x)
}

struct EnergyEvaluator {
    temperature: TemperatureEvaluator,
    rho0: f64,
    t0: f64,
}

impl EnergyEvaluator {
    fn new(model: &StellarModel, consts: &PhysicalConstants) -> Result<Self> {
        let temperature = TemperatureEvaluator::new(model, consts)?;
        let t0 = match model.t0 {
            Some(t) => t,
            None => temperature.at(0.0)?.value,
        };
        Ok(Self { temperature, rho0: model.rho0.unwrap_or(model.rho_c), t0 })
    }

    fn model(&self) -> &StellarModel {
        &self.temperature.pressure.model
    }

    /// ε with the convention 0⁰ = 1 at the surface.
    fn at(&self, x: f64) -> Result<f64> {
        let m = self.model();
        let rho = density_unchecked(m, x);
        let t = self.temperature.with_limit(x)?;
        Ok(m.eps0 * (rho / self.rho0).powf(m.alpha) * (t / self.t0).powf(m.beta))
    }
}

/// ε(x) = ε₀(ρ/ρ₀)^α(T/T₀)^β in erg g⁻¹ s⁻¹.
pub fn energy_rate(model: &StellarModel, x: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_x(x, false)?;
    EnergyEvaluator::new(model, consts)?.at(x)
}

/// Factors (1 + a_i x) of the Linear temperature polynomial normalised to 1 at x = 0:
/// 5 + 5x − 19x² + 9x³ = 5(1 − x)(1 + a_1 x)(1 + a_2 x).
pub fn linear_temperature_roots() -> [f64; 2] {
    // roots of 9x² − 10x − 5
    let s = 280f64.sqrt();
    let r1 = (10.0 + s) / 18.0;
    let r2 = (10.0 - s) / 18.0;
    [-1.0 / r1, -1.0 / r2]
}

/// g = ∫₀¹ x^γ (1 − x)^{α+1} Π(1 + a_i x)^β dx, closed form through F_D and
/// by quadrature.
pub fn g_integral(alpha: f64, beta_exp: f64, gamma_exp: f64, roots: &[f64]) -> Result<DualResult> {
    if !(alpha > -2.0 && gamma_exp > -1.0 && beta_exp.is_finite()) {
        return Err(Error::invalid(format!(
            "g_integral needs alpha > -2 and gamma > -1, got alpha = {alpha}, gamma = {gamma_exp}"
        )));
    }
    if let Some(&a) = roots.iter().find(|&&a| !(a > -1.0 && a.is_finite())) {
        return Err(Error::invalid(format!("every polynomial coefficient a_i must exceed -1, got {a}")));
    }
    let r = roots.to_vec();
    let integrand = move |x: f64| {
        let mut v = x.powf(gamma_exp) * (1.0 - x).powf(alpha + 1.0);
        for a in &r {
            v *= (1.0 + a * x).powf(beta_exp);
        }
        v
    };
    let oracle = integrate(&QuadratureRequest::finite(integrand, 0.0, 1.0).rel_tol(ORACLE_REL_TOL))?;
    let bs = vec![-beta_exp; roots.len()];
    let xs: Vec<f64> = roots.iter().map(|a| -a).collect();
    let closed = beta(gamma_exp + 1.0, alpha + 2.0).and_then(|b| {
        lauricella_fd(gamma_exp + 1.0, &bs, gamma_exp + alpha + 3.0, &xs, 1e-15).map(|f| f.scaled(b))
    });
    Ok(match closed {
        Ok(c) => DualResult::new(c, oracle),
        Err(e) => DualResult::oracle_only(oracle, format!("F_D closed form unavailable: {e}")),
    })
}

fn integer_exponent(v: f64) -> Option<u32> {
    (v >= 0.0 && v == v.round() && v <= 64.0).then_some(v as u32)
}

/// Total luminosity L = 4πR³∫₀¹x²ρε dx in erg s⁻¹: oracle always, closed
/// form for Linear with integer β and for PowerLaw with integer β.
pub fn luminosity(model: &StellarModel, consts: &PhysicalConstants) -> Result<DualResult> {
    let energy = EnergyEvaluator::new(model, consts)?;
    let m = *model;
    let scale = 4.0 * PI * m.radius.powi(3);
    let failure = std::sync::Mutex::new(None);
    let integrand = |x: f64| match energy.at(x) {
        Ok(eps) => x * x * density_unchecked(&m, x) * eps,
        Err(e) => {
            failure.lock().unwrap().get_or_insert(e);
            f64::NAN
        }
    };
    let res = integrate(&QuadratureRequest::finite(integrand, 0.0, 1.0).rel_tol(ORACLE_REL_TOL));
    if let Some(e) = failure.lock().unwrap().take() {
        return Err(e);
    }
    let mut oracle = res?;
    if !oracle.converged {
        return Err(Error::convergence(
            "luminosity quadrature did not converge",
            crate::eval::SeriesDiagnostics::new(oracle.evaluations, oracle.error_estimate),
        ));
    }
    oracle.value *= scale;
    oracle.error_estimate *= scale;

    // central normalisation ρ_c ε₀ (ρ_c/ρ₀)^α (T(0)/T₀)^β
    let tc = energy.temperature.at(0.0)?.value;
    let central = m.rho_c * m.eps0 * (m.rho_c / energy.rho0).powf(m.alpha) * (tc / energy.t0).powf(m.beta);
    let closed = match (m.profile, integer_exponent(m.beta)) {
        (Profile::Linear, Some(_)) => {
            let g = g_integral(m.alpha + m.beta, m.beta, 2.0, &linear_temperature_roots())?;
            if g.closed_form.method == Method::Oracle {
                Err(g.closed_form.notes.join("; "))
            } else {
                Ok(g.closed_form.scaled(scale * central))
            }
        }
        (Profile::PowerLaw { delta }, Some(b)) if 2.0 + m.alpha - m.beta > 0.0 => {
            power_law_luminosity_integral(delta, m.alpha, b).map(|v| EvalResult::exact(v * scale * central))
        }
        (Profile::PowerLaw { .. }, Some(_)) => Err("closed form needs 2 + alpha - beta > 0".to_string()),
        (_, None) => Err("closed form needs a non-negative integer beta".to_string()),
        (Profile::TwoParameter { .. }, _) => Err("no closed form for the two-parameter profile".to_string()),
    };
    Ok(match closed {
        Ok(c) => DualResult::new(c, oracle),
        Err(why) => DualResult::oracle_only(oracle, why),
    })
}

/// (1/δ)∫₀¹ u^{3/δ−1}(1 − u)^{1+α−β}[P(u)/P(0)]^β du with integer β, expanded
/// multinomially into beta functions.
fn power_law_luminosity_integral(delta: f64, alpha: f64, beta_exp: u32) -> std::result::Result<f64, String> {
    let (a, b) = power_law_coefficients(delta);
    let ps = psi(delta);
    // P/P0 = 1 + c1 u^{2/δ} + c2 u^{2/δ+1} + c3 u^{2/δ+2}
    let c = [-1.0 / (2.0 * ps), a / ps, -b / ps];
    let tail = 2.0 + alpha - beta_exp as f64;
    let n = beta_exp;
    let mut total = 0.0;
    for j in 0..=n {
        for k in 0..=(n - j) {
            for l in 0..=(n - j - k) {
                let i = n - j - k - l;
                let multinomial = pochhammer(1.0, n) / (pochhammer(1.0, i) * pochhammer(1.0, j) * pochhammer(1.0, k) * pochhammer(1.0, l));
                let coeff = multinomial * c[0].powi(j as i32) * c[1].powi(k as i32) * c[2].powi(l as i32);
                let e = 2.0 / delta * (j + k + l) as f64 + k as f64 + 2.0 * l as f64;
                total += coeff * beta(3.0 / delta + e, tail).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(total / delta)
}

/// Profile table on x = i/n, i = 0..n−1, plus the surface row with the
/// limiting values T(1) = 0 and ε(1) = ε₀·0^α·0^β (0⁰ = 1).
pub fn tabulate_profile(model: &StellarModel, consts: &PhysicalConstants, n_points: usize) -> Result<Vec<ProfilePoint>> {
    if n_points < 2 {
        return Err(Error::invalid(format!("n_points must be >= 2, got {n_points}")));
    }
    let energy = EnergyEvaluator::new(model, consts)?;
    let pressure = &energy.temperature.pressure;
    let mut rows = Vec::with_capacity(n_points + 1);
    for i in 0..=n_points {
        let x = if i == n_points { 1.0 } else { i as f64 / n_points as f64 };
        rows.push(ProfilePoint {
            x,
            rho: density_unchecked(model, x),
            mass: mass(model, x)?.value,
            pressure: pressure.at(x)?.value,
            temperature: energy.temperature.with_limit(x)?,
            eps: energy.at(x)?,
        });
    }
    Ok(rows)
}
