mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use stellar_gfun::stellar::{self, Profile, StellarModel, CGS};
use stellar_gfun::Method;

fn rho_reduced(profile: Profile, x: f64) -> f64 {
    match profile {
        Profile::Linear => 1.0 - x,
        Profile::PowerLaw { delta } => 1.0 - x.powf(delta),
        Profile::TwoParameter { delta, gamma } => (1.0 - x.powf(delta)).powf(gamma),
    }
}

/// Hydrostatic pressure from scratch: P(x) = G ρ_c² R² ∫_x^1 4π m(s) ρ̂(s)/s² ds.
fn pressure_oracle(model: &StellarModel, x: f64) -> f64 {
    let pr = model.profile;
    let m = |s: f64| tanh_sinh(|t| t * t * rho_reduced(pr, t), 0.0, s, 1e-14);
    let inner = tanh_sinh(|s| if s == 0.0 { 0.0 } else { m(s) * rho_reduced(pr, s) / (s * s) }, x, 1.0, 1e-13);
    4.0 * PI * CGS.gravitational * model.rho_c.powi(2) * model.radius.powi(2) * inner
}

fn models() -> Vec<StellarModel> {
    vec![
        StellarModel::new(Profile::Linear),
        StellarModel::new(Profile::PowerLaw { delta: 1.0 }),
        StellarModel::new(Profile::PowerLaw { delta: 2.5 }),
        StellarModel::new(Profile::TwoParameter { delta: 2.0, gamma: 1.5 }),
        StellarModel::new(Profile::TwoParameter { delta: 0.8, gamma: 3.0 }),
    ]
}

#[test]
fn pressure_satisfies_hydrostatic_equilibrium() {
    for model in models() {
        let p0 = stellar::pressure(&model, 0.0, &CGS).unwrap().value;
        for &x in &[0.0, 0.2, 0.55, 0.9, 1.0] {
            let got = stellar::pressure(&model, x, &CGS).unwrap().value;
            let want = pressure_oracle(&model, x);
            assert!((got - want).abs() < 1e-9 * p0, "{:?} x={x}: {got} vs {want}", model.profile);
        }
    }
}

#[test]
fn mass_matches_reference_quadrature() {
    for model in models() {
        for &x in &[0.1, 0.5, 1.0] {
            let got = stellar::mass(&model, x).unwrap().value;
            let want = 4.0 * PI * model.rho_c * model.radius.powi(3) * tanh_sinh(|t| t * t * rho_reduced(model.profile, t), 0.0, x, 1e-14);
            assert!(rel(got, want) < 1e-11, "{:?} x={x}", model.profile);
        }
    }
}

#[test]
fn profiles_reduce_to_each_other() {
    let lin = StellarModel::new(Profile::Linear);
    let pl1 = StellarModel::new(Profile::PowerLaw { delta: 1.0 });
    let pl = StellarModel::new(Profile::PowerLaw { delta: 1.7 });
    let tp1 = StellarModel::new(Profile::TwoParameter { delta: 1.7, gamma: 1.0 });
    for x in (0..50).map(|i| i as f64 / 50.0) {
        for (a, b) in [(&lin, &pl1), (&pl, &tp1)] {
            assert!(rel(stellar::density(a, x).unwrap(), stellar::density(b, x).unwrap()) < 1e-10);
            assert!(rel(stellar::mass(a, x).unwrap().value, stellar::mass(b, x).unwrap().value) < 1e-10);
            let (pa, pb) = (stellar::pressure(a, x, &CGS).unwrap().value, stellar::pressure(b, x, &CGS).unwrap().value);
            assert!(rel(pa, pb) < 1e-10, "x={x}: {pa} vs {pb}");
            let (ta, tb) = (stellar::temperature(a, x, &CGS).unwrap().value, stellar::temperature(b, x, &CGS).unwrap().value);
            assert!(rel(ta, tb) < 1e-10, "x={x}: {ta} vs {tb}");
        }
    }
}

#[test]
fn temperature_obeys_ideal_gas_law() {
    for model in models() {
        for &x in &[0.0, 0.4, 0.9] {
            let t = stellar::temperature(&model, x, &CGS).unwrap().value;
            let p = stellar::pressure(&model, x, &CGS).unwrap().value;
            let rho = stellar::density(&model, x).unwrap();
            let want = p * model.mu * CGS.atomic_mass_unit / (CGS.boltzmann * rho);
            assert!(rel(t, want) < 1e-12);
        }
    }
    assert!(stellar::temperature(&StellarModel::new(Profile::Linear), 1.0, &CGS).is_err());
}

#[test]
fn luminosity_matches_reference_quadrature() {
    let cases = [
        StellarModel::new(Profile::Linear),
        StellarModel::new(Profile::Linear).with_energy(2.0, 3.0, 0.5),
        StellarModel::new(Profile::PowerLaw { delta: 2.0 }).with_energy(1.0, 3.0, 1.0),
        StellarModel::new(Profile::TwoParameter { delta: 2.0, gamma: 2.0 }).with_energy(1.0, 2.0, 1.0),
    ];
    for model in cases {
        let l = stellar::luminosity(&model, &CGS).unwrap();
        let tc = stellar::temperature(&model, 0.0, &CGS).unwrap().value;
        let integrand = |x: f64| {
            if x >= 1.0 {
                return 0.0;
            }
            let rho = stellar::density(&model, x).unwrap();
            let t = stellar::temperature(&model, x, &CGS).unwrap().value;
            x * x * rho * model.eps0 * (rho / model.rho_c).powf(model.alpha) * (t / tc).powf(model.beta)
        };
        let want = 4.0 * PI * model.radius.powi(3) * tanh_sinh(integrand, 0.0, 1.0, 1e-12);
        assert!(rel(l.value(), want) < 1e-9, "{:?}: {} vs {want}", model.profile, l.value());
        if let Some(a) = l.agreement {
            assert!(a < 1e-8);
        }
    }
    // no closed form when the density power of the integrand goes negative
    let l = stellar::luminosity(&StellarModel::new(Profile::PowerLaw { delta: 2.0 }).with_energy(1.5, 4.0, 1.0), &CGS).unwrap();
    assert_eq!(l.method(), Method::Oracle);
    assert!(l.agreement.is_none());
}

#[test]
fn tabulation_invariants() {
    for model in models() {
        let rows = stellar::tabulate_profile(&model, &CGS, 11).unwrap();
        assert_eq!(rows.len(), 12);
        assert_eq!(rows[0].x, 0.0);
        assert_eq!(rows[11].x, 1.0);
        assert_eq!(rows[11].pressure, 0.0);
        assert_eq!(rows[11].temperature, 0.0);
        assert_eq!(rows[0].mass, 0.0);
        for w in rows.windows(2) {
            assert!(w[1].pressure < w[0].pressure);
            assert!(w[1].mass > w[0].mass);
            assert!(w[1].rho < w[0].rho);
        }
    }
}

#[test]
fn invalid_models_are_rejected() {
    assert!(StellarModel::new(Profile::PowerLaw { delta: 0.0 }).validate().is_err());
    assert!(StellarModel::new(Profile::TwoParameter { delta: 1.0, gamma: -0.5 }).validate().is_err());
    assert!(StellarModel::new(Profile::Linear).with_structure(-1.0, 1.0, 1.0).validate().is_err());
    assert!(stellar::density(&StellarModel::new(Profile::Linear), 1.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_law_pressure_decreases_outward(delta in 0.3f64..6.0, x in 0.0f64..0.98) {
        let model = StellarModel::new(Profile::PowerLaw { delta });
        let p1 = stellar::pressure(&model, x, &CGS).unwrap().value;
        let p2 = stellar::pressure(&model, x + 0.02, &CGS).unwrap().value;
        prop_assert!(p2 < p1);
        prop_assert!(stellar::pressure(&model, 1.0, &CGS).unwrap().value.abs() <= 1e-12 * stellar::pressure(&model, 0.0, &CGS).unwrap().value);
    }

    #[test]
    fn central_pressure_matches_psi(delta in 0.3f64..6.0) {
        let model = StellarModel::new(Profile::PowerLaw { delta });
        let p0 = stellar::pressure(&model, 0.0, &CGS).unwrap().value;
        let want = 4.0 * PI / 3.0 * CGS.gravitational * model.rho_c.powi(2) * model.radius.powi(2) * stellar::psi(delta);
        prop_assert!(rel(p0, want) < 1e-12);
    }

    #[test]
    fn two_parameter_mass_is_monotone(delta in 0.5f64..4.0, gamma in 0.2f64..4.0, x in 0.01f64..0.95) {
        let model = StellarModel::new(Profile::TwoParameter { delta, gamma });
        let m1 = stellar::mass(&model, x).unwrap().value;
        let m2 = stellar::mass(&model, x + 0.05).unwrap().value;
        prop_assert!(m2 > m1);
        let want = 4.0 * PI * model.rho_c * model.radius.powi(3) * tanh_sinh(|t| t * t * rho_reduced(model.profile, t), 0.0, x, 1e-14);
        prop_assert!(rel(m1, want) < 1e-10);
    }
}
