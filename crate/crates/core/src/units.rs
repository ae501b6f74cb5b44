//! Natural units used by every kernel: `c = ħ = 1`, lengths in micrometres.
//!
//! Frequencies and wavenumbers are therefore both measured in µm⁻¹, times in µm
//! (light-travel distance) and energies in µm⁻¹ (multiples of `ħc / 1 µm`).
//! Conversion to SI or eV happens only at the CLI boundary.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// ħc in eV·µm (CODATA 2018: 197.326 980 4 MeV·fm).
pub const HBAR_C_EV_UM: f64 = 0.197_326_980_4;

/// One micrometre in metres.
pub const MICROMETRE_M: f64 = 1.0e-6;

/// Seconds per internal time unit (the light-crossing time of 1 µm).
pub const SECONDS_PER_INTERNAL_TIME: f64 = MICROMETRE_M / SPEED_OF_LIGHT_M_PER_S;

/// The frozen constant table used for all boundary conversions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    pub speed_of_light_m_per_s: f64,
    pub hbar_c_ev_um: f64,
    pub length_unit_m: f64,
}

impl UnitSystem {
    pub const NATURAL_MICROMETRE: UnitSystem = UnitSystem {
        speed_of_light_m_per_s: SPEED_OF_LIGHT_M_PER_S,
        hbar_c_ev_um: HBAR_C_EV_UM,
        length_unit_m: MICROMETRE_M,
    };
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::NATURAL_MICROMETRE
    }
}

/// Angular frequency in rad/s to internal units (µm⁻¹).
pub fn omega_to_internal(omega_si: f64) -> Result<f64> {
    if !(omega_si >= 0.0) || !omega_si.is_finite() {
        return Err(Error::Domain {
            what: "angular frequency",
            value: omega_si,
        });
    }
    Ok(omega_si * SECONDS_PER_INTERNAL_TIME)
}

/// Internal frequency (µm⁻¹) back to rad/s.
pub fn omega_to_si(omega: f64) -> f64 {
    omega / SECONDS_PER_INTERNAL_TIME
}

/// Internal energy to eV.
pub fn energy_to_ev(e_internal: f64) -> f64 {
    e_internal * HBAR_C_EV_UM
}

pub fn energy_from_ev(e_ev: f64) -> f64 {
    e_ev / HBAR_C_EV_UM
}

/// Time in seconds to internal units (µm of light travel).
pub fn time_to_internal(t_seconds: f64) -> f64 {
    t_seconds / SECONDS_PER_INTERNAL_TIME
}

pub fn time_to_si(t: f64) -> f64 {
    t * SECONDS_PER_INTERNAL_TIME
}

pub fn femtoseconds_to_internal(t_fs: f64) -> f64 {
    time_to_internal(t_fs * 1.0e-15)
}

/// A spectral density dN/dω in internal units (µm) to seconds.
pub fn spectral_density_to_si(dn_domega: f64) -> f64 {
    dn_domega * SECONDS_PER_INTERNAL_TIME
}

/// Physical scenario: a bubble of index `n_inside` and radius `radius` inside a
/// medium of index `n_outside`, with a sharp wavenumber cutoff `cutoff` above
/// which the medium behaves like vacuum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BubbleConfig {
    pub n_inside: f64,
    pub n_outside: f64,
    /// Bubble radius R in µm.
    pub radius: f64,
    /// Cutoff wavenumber K in µm⁻¹.
    pub cutoff: f64,
    pub label: String,
}

impl BubbleConfig {
    pub fn new(n_outside: f64, radius: f64, cutoff: f64) -> Result<Self> {
        let config = BubbleConfig {
            n_inside: 1.0,
            n_outside,
            radius,
            cutoff,
            label: String::new(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_inside >= 1.0) || !self.n_inside.is_finite() {
            return Err(invalid(
                "n_inside",
                "refractive index must be finite and >= 1",
            ));
        }
        if !(self.n_outside >= 1.0) || !self.n_outside.is_finite() {
            return Err(invalid(
                "n_outside",
                "refractive index must be finite and >= 1",
            ));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(invalid("radius", "bubble radius must be finite and > 0"));
        }
        if !(self.cutoff > 0.0) || !self.cutoff.is_finite() {
            return Err(invalid(
                "cutoff",
                "cutoff wavenumber must be finite and > 0",
            ));
        }
        Ok(())
    }

    /// Refractive index of the medium outside the bubble.
    pub fn n(&self) -> f64 {
        self.n_outside
    }

    /// The dimensionless size parameter RK.
    pub fn rk(&self) -> f64 {
        self.radius * self.cutoff
    }

    /// Highest emitted frequency, K/n.
    pub fn omega_out_max(&self) -> f64 {
        self.cutoff / self.n_outside
    }

    pub(crate) fn require_vacuum_interior(&self) -> Result<()> {
        if self.n_inside != 1.0 {
            return Err(Error::Unsupported(format!(
                "finite-volume mode matching assumes n_inside = 1, got {}",
                self.n_inside
            )));
        }
        Ok(())
    }
}
