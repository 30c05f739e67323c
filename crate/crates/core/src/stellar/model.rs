use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants in cgs units (CODATA 2018).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Gravitational constant, cm³ g⁻¹ s⁻².
    pub gravitational: f64,
    /// Boltzmann constant, erg K⁻¹.
    pub boltzmann: f64,
    /// Atomic mass unit, g.
    pub atomic_mass_unit: f64,
}

pub const CGS: PhysicalConstants = PhysicalConstants {
    gravitational: 6.674_30e-8,
    boltzmann: 1.380_649e-16,
    atomic_mass_unit: 1.660_539_066_60e-24,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CGS
    }
}

/// Radial density profile ρ(x) = ρ_c (1 − x^δ)^γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Linear,
    PowerLaw { delta: f64 },
    TwoParameter { delta: f64, gamma: f64 },
}

impl Profile {
    /// (δ, γ) of the general two-parameter family.
    pub fn exponents(&self) -> (f64, f64) {
        match *self {
            Profile::Linear => (1.0, 1.0),
            Profile::PowerLaw { delta } => (delta, 1.0),
            Profile::TwoParameter { delta, gamma } => (delta, gamma),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Linear => "linear",
            Profile::PowerLaw { .. } => "power-law",
            Profile::TwoParameter { .. } => "two-parameter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StellarModel {
    pub profile: Profile,
    /// Central density, g cm⁻³.
    pub rho_c: f64,
    /// Stellar radius, cm.
    pub radius: f64,
    /// Mean molecular weight.
    pub mu: f64,
    /// Density exponent of the energy generation rate.
    pub alpha: f64,
    /// Temperature exponent of the energy generation rate.
    pub beta: f64,
    /// Energy generation normalisation ε₀, erg g⁻¹ s⁻¹.
    pub eps0: f64,
    /// Reference density for ε; defaults to ρ_c.
    pub rho0: Option<f64>,
    /// Reference temperature for ε; defaults to T(0).
    pub t0: Option<f64>,
}

impl StellarModel {
    /// Solar-like defaults: ρ_c = 150 g cm⁻³, R = 6.957e10 cm, μ = 0.62,
    /// α = 1, β = 4, ε₀ = 1.
    pub fn new(profile: Profile) -> Self {
        Self {
            profile,
            rho_c: 150.0,
            radius: 6.957e10,
            mu: 0.62,
            alpha: 1.0,
            beta: 4.0,
            eps0: 1.0,
            rho0: None,
            t0: None,
        }
    }

    pub fn with_structure(mut self, rho_c: f64, radius: f64, mu: f64) -> Self {
        self.rho_c = rho_c;
        self.radius = radius;
        self.mu = mu;
        self
    }

    pub fn with_energy(mut self, alpha: f64, beta: f64, eps0: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self.eps0 = eps0;
        self
    }

    pub fn with_reference(mut self, rho0: Option<f64>, t0: Option<f64>) -> Self {
        self.rho0 = rho0;
        self.t0 = t0;
        self
    }

    /// Check every parameter invariant.
    ///
    /// α = 0 and β = 0 are accepted: they reduce ε to a constant or to a pure
    /// density power law.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be > 0, got {v}")))
            }
        };
        positive("rho_c", self.rho_c)?;
        positive("radius", self.radius)?;
        positive("mu", self.mu)?;
        positive("eps0", self.eps0)?;
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be >= 0, got {v}")));
            }
        }
        match self.profile {
            Profile::Linear => {}
            Profile::PowerLaw { delta } => positive("delta", delta)?,
            Profile::TwoParameter { delta, gamma } => {
                positive("delta", delta)?;
                positive("gamma", gamma)?;
            }
        }
        if let Some(r) = self.rho0 {
            positive("rho0", r)?;
        }
        if let Some(t) = self.t0 {
            positive("t0", t)?;
        }
        Ok(())
    }
}

/// One row of a tabulated profile, cgs units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub x: f64,
    pub rho: f64,
    pub mass: f64,
    pub pressure: f64,
    pub temperature: f64,
    pub eps: f64,
}
