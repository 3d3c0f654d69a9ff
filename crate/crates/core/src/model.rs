//! Model parameters, the cut-off coupling function and the frequencies
//! derived from it.
//!
//! The atom couples to the continuum through `V(ω)` with
//! `V²(ω) = a · ω³ · exp(-ω/ω_c)`. In reduced units (`ħ = 1`) the amplitude
//! `a` is supplied directly; in physical units it is `C/Ω₀` with
//! `C = e²/(3π²ε₀c³m)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{self, Estimate, QuadratureConfig};

/// "Much less than" for the dipole-approximation check.
pub const DIPOLE_RATIO_LIMIT: f64 = 1e-3;

/// SI constants entering the physical-units coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Magnitude of the charge, C.
    pub charge: f64,
    /// Mass, kg.
    pub mass: f64,
    /// Vacuum permittivity, F/m.
    pub epsilon0: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values for an electron.
    pub fn electron() -> Self {
        Self {
            charge: 1.602_176_634e-19,
            mass: 9.109_383_701_5e-31,
            epsilon0: 8.854_187_812_8e-12,
            c: 299_792_458.0,
            hbar: 1.054_571_817e-34,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [self.charge, self.mass, self.epsilon0, self.c, self.hbar];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::Domain(format!("physical constants must be positive: {self:?}")))
        }
    }

    /// `C = e²/(3π²ε₀c³m)`, in seconds.
    pub fn coupling_constant(&self) -> f64 {
        self.charge.powi(2) / (3.0 * PI * PI * self.epsilon0 * self.c.powi(3) * self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Units {
    /// `ħ = 1`; the coupling is the dimensionless amplitude `A`.
    Reduced,
    /// SI units; the coupling is `C` and `V²` carries an extra `1/Ω₀`.
    Physical(PhysicalConstants),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega0: f64,
    pub omega_c: f64,
    /// `A` in reduced units, `C` in physical units.
    pub coupling: f64,
    pub units: Units,
}

impl ModelParams {
    pub fn reduced(omega0: f64, omega_c: f64, amplitude: f64) -> Result<Self> {
        let p = Self { omega0, omega_c, coupling: amplitude, units: Units::Reduced };
        p.validate()?;
        Ok(p)
    }

    /// Physical-units parameters with `C` computed from `constants`.
    pub fn physical(omega0: f64, omega_c: f64, constants: PhysicalConstants) -> Result<Self> {
        constants.validate()?;
        let p = Self {
            omega0,
            omega_c,
            coupling: constants.coupling_constant(),
            units: Units::Physical(constants),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::Domain(format!("omega0 must be positive, got {}", self.omega0)));
        }
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(Error::Domain(format!("omega_c must be positive, got {}", self.omega_c)));
        }
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(Error::Domain(format!("coupling must be non-negative, got {}", self.coupling)));
        }
        Ok(())
    }

    /// Prefactor `a` in `V²(ω) = a ω³ e^{-ω/ω_c}`.
    pub fn amplitude(&self) -> f64 {
        match self.units {
            Units::Reduced => self.coupling,
            Units::Physical(_) => self.coupling / self.omega0,
        }
    }

    /// `C`, the Ω₀-independent coupling constant. In reduced units `C = A·Ω₀`.
    pub fn coupling_constant(&self) -> f64 {
        self.amplitude() * self.omega0
    }

    /// `ħ` in the chosen units.
    pub fn hbar(&self) -> f64 {
        match self.units {
            Units::Reduced => 1.0,
            Units::Physical(c) => c.hbar,
        }
    }

    pub fn is_uncoupled(&self) -> bool {
        self.coupling == 0.0
    }

    /// Same model with a different bare frequency. The stored coupling is
    /// kept, so `a` is unchanged in reduced units and `C` in physical units.
    pub fn with_omega0(&self, omega0: f64) -> Self {
        Self { omega0, ..*self }
    }

    /// Fails unless `Ω₀ > Ω_T`.
    pub fn require_below_threshold(&self) -> Result<()> {
        let omega_t = threshold_frequency(self);
        if self.omega0 > omega_t {
            Ok(())
        } else {
            Err(Error::ThresholdViolation { omega0: self.omega0, omega_t })
        }
    }

    /// Quadrature defaults matched to the `e^{-ω/ω_c}` decay of this model.
    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig::for_cutoff(self.omega_c)
    }
}

/// `V²(ω)` without the domain check; callers guarantee `ω ≥ 0`.
#[inline]
pub(crate) fn v2_unchecked(params: &ModelParams, omega: f64) -> f64 {
    params.amplitude() * omega.powi(3) * (-omega / params.omega_c).exp()
}

/// `V²(ω) = a ω³ e^{-ω/ω_c}`.
pub fn coupling_v2(params: &ModelParams, omega: f64) -> Result<f64> {
    if omega.is_nan() || omega < 0.0 {
        return Err(Error::Domain(format!("coupling needs omega >= 0, got {omega}")));
    }
    Ok(v2_unchecked(params, omega))
}

/// `V(ω) = sqrt(V²(ω))`, the positive root.
pub fn coupling_v(params: &ModelParams, omega: f64) -> Result<f64> {
    coupling_v2(params, omega).map(f64::sqrt)
}

/// `Ω_T = ∫₀^∞ V²(ω)/ω dω = 2 a ω_c³` in closed form.
pub fn threshold_frequency(params: &ModelParams) -> f64 {
    2.0 * params.amplitude() * params.omega_c.powi(3)
}

/// `Ω_T` by direct semi-infinite quadrature of `V²(ω)/ω`.
pub fn threshold_by_quadrature(params: &ModelParams, cfg: &QuadratureConfig) -> Result<Estimate> {
    quadrature::integrate_semi_infinite(|w| if w > 0.0 { v2_unchecked(params, w) / w } else { 0.0 }, cfg)
}

/// Largest cutoff for which `Ω_T < Ω₀`: `(Ω₀/(2a))^{1/3}`, which in physical
/// units reads `(3π²ε₀c³mΩ₀²/(2e²))^{1/3}`.
pub fn cutoff_bound(params: &ModelParams) -> f64 {
    match params.units {
        Units::Reduced => (params.omega0 / (2.0 * params.amplitude())).cbrt(),
        Units::Physical(k) => (3.0 * PI * PI * k.epsilon0 * k.c.powi(3) * k.mass * params.omega0.powi(2)
            / (2.0 * k.charge.powi(2)))
        .cbrt(),
    }
}

/// `ω₀ = sqrt(Ω₀(Ω₀ - Ω_T))`.
pub fn renormalized_frequency(params: &ModelParams) -> Result<f64> {
    params.require_below_threshold()?;
    let omega_t = threshold_frequency(params);
    Ok((params.omega0 * (params.omega0 - omega_t)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFrequencies {
    pub omega_t: f64,
    pub omega_0_renorm: f64,
    /// `Λ = e²ω_c²/(6πε₀c³m) = (π/2) C ω_c²`, the frequency unit of the
    /// virtual-photon plots.
    pub figure_unit: f64,
}

pub fn derived_frequencies(params: &ModelParams) -> Result<DerivedFrequencies> {
    Ok(DerivedFrequencies {
        omega_t: threshold_frequency(params),
        omega_0_renorm: renormalized_frequency(params)?,
        figure_unit: figure_unit(params),
    })
}

pub fn figure_unit(params: &ModelParams) -> f64 {
    0.5 * PI * params.coupling_constant() * params.omega_c.powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleValidity {
    pub valid: bool,
    /// `ħΩ₀ / (8π² m c²)`.
    pub ratio: f64,
}

/// Dipole-approximation check `ħΩ₀ ≪ 8π²mc²` for an arbitrary frequency.
pub fn dipole_ratio(omega0: f64, constants: &PhysicalConstants) -> Result<DipoleValidity> {
    constants.validate()?;
    if omega0.is_nan() || omega0 < 0.0 {
        return Err(Error::Domain(format!("omega0 must be non-negative, got {omega0}")));
    }
    let ratio = constants.hbar * omega0 / (8.0 * PI * PI * constants.mass * constants.c.powi(2));
    Ok(DipoleValidity { valid: ratio < DIPOLE_RATIO_LIMIT, ratio })
}

pub fn dipole_validity(params: &ModelParams) -> Result<DipoleValidity> {
    match params.units {
        Units::Physical(k) => dipole_ratio(params.omega0, &k),
        Units::Reduced => Err(Error::NotApplicable("dipole validity needs physical units".into())),
    }
}

/// Prefactors linking the Hamiltonian coupling to the field operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPrefactors {
    /// `(ħ²e²/(12π²ε₀c³mΩ₀))^{1/2}`, multiplying `(a+a†) ∫ω^{3/2}(b+b†)dω`.
    pub hamiltonian: f64,
    /// `(ħ/(2ε₀c³))^{1/2}/(√3 π)`, so that `E_z(0) = field ∫ω^{3/2}(b+b†)dω`.
    pub field: f64,
    /// `(ħ/(2mΩ₀))^{1/2}`, the ground-state width of the bare oscillator.
    pub position: f64,
}

pub fn physical_coupling_prefactor(constants: &PhysicalConstants, omega0: f64) -> Result<CouplingPrefactors> {
    constants.validate()?;
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::Domain(format!("omega0 must be positive, got {omega0}")));
    }
    let k = constants;
    let hamiltonian = (k.hbar.powi(2) * k.charge.powi(2)
        / (12.0 * PI * PI * k.epsilon0 * k.c.powi(3) * k.mass * omega0))
        .sqrt();
    let field = (k.hbar / (2.0 * k.epsilon0 * k.c.powi(3))).sqrt() / (3f64.sqrt() * PI);
    let position = (k.hbar / (2.0 * k.mass * omega0)).sqrt();
    Ok(CouplingPrefactors { hamiltonian, field, position })
}
