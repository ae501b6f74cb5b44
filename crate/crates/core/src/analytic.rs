//! Closed forms: the static Casimir energy of the bubble (Schwinger's bulk term and the
//! zero-point dispersion integral it comes from) and the large-volume limit of the
//! radiated spectrum.
//!
//! All values are in internal units (`ħ = c = 1`, lengths in µm, energies in µm⁻¹).

use std::f64::consts::PI;

use crate::error::Result;
use crate::quad::{integrate, QuadOptions};
use crate::units::BubbleConfig;

/// Large-volume totals together with the configuration they describe.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticResult {
    pub photon_number: f64,
    pub energy: f64,
    pub provenance: &'static str,
    config: BubbleConfig,
}

impl AnalyticResult {
    pub fn new(config: &BubbleConfig) -> Result<Self> {
        Ok(AnalyticResult {
            photon_number: analytic_total_number(config)?,
            energy: analytic_total_energy(config)?,
            provenance: "large-volume phase-space spectrum n²((n-1)/n)² R³ω²/(2π) Θ(K - nω)",
            config: config.clone(),
        })
    }

    /// dN/dω_out of the large-volume limit.
    pub fn density(&self, omega_out: f64) -> f64 {
        analytic_dn_domega(&self.config, omega_out)
    }

    pub fn config(&self) -> &BubbleConfig {
        &self.config
    }
}

/// Bulk static Casimir energy `(1/6π) R³ K⁴ (1/√ε_in − 1/√ε_out)`.
pub fn schwinger_casimir_energy(config: &BubbleConfig) -> Result<f64> {
    config.validate()?;
    let r3k4 = config.radius.powi(3) * config.cutoff.powi(4);
    Ok(r3k4 / (6.0 * PI) * (1.0 / config.n_inside - 1.0 / config.n_outside))
}

/// Zero-point energy difference `2V ∫ d³k/(2π)³ ½[ω_in(k) − ω_out(k)]` with
/// `ω = k/n` below the cutoff and `ω = k` above it, in closed form.
pub fn dispersion_casimir_energy(config: &BubbleConfig) -> Result<f64> {
    config.validate()?;
    let volume = 4.0 / 3.0 * PI * config.radius.powi(3);
    // 2V/(2π)³ · 4π · ½ · ∫₀^K k³ dk · (1/n_in − 1/n_out)
    let dispersion = 1.0 / config.n_inside - 1.0 / config.n_outside;
    Ok(volume / (2.0 * PI * PI) * dispersion * config.cutoff.powi(4) / 4.0)
}

/// The same k-integral evaluated by adaptive quadrature over `[0, 2K]`, split at the
/// cutoff.
pub fn dispersion_casimir_energy_quadrature(config: &BubbleConfig) -> Result<f64> {
    config.validate()?;
    let k_cut = config.cutoff;
    let omega = |k: f64, n: f64| if k < k_cut { k / n } else { k };
    let volume = 4.0 / 3.0 * PI * config.radius.powi(3);
    let integrand = |k: f64| {
        let zero_point = 0.5 * (omega(k, config.n_inside) - omega(k, config.n_outside));
        Ok(2.0 * volume * 4.0 * PI * k * k / (2.0 * PI).powi(3) * zero_point)
    };
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        max_intervals: 1000,
    };
    Ok(integrate(integrand, 0.0, 2.0 * k_cut, &[k_cut], &opts)?.value)
}

/// Large-volume spectrum `n²((n−1)/n)² R³ω²/(2π) Θ(K − nω)`.
pub fn analytic_dn_domega(config: &BubbleConfig, omega_out: f64) -> f64 {
    let n = config.n();
    if n * omega_out > config.cutoff || omega_out < 0.0 {
        return 0.0;
    }
    let contrast = (n - 1.0) / n;
    n * n * contrast * contrast * config.radius.powi(3) * omega_out * omega_out / (2.0 * PI)
}

/// `E ≈ (1/(8π n²)) ((n−1)/n)² K (RK)³`.
pub fn analytic_total_energy(config: &BubbleConfig) -> Result<f64> {
    config.validate()?;
    let n = config.n();
    let contrast = (n - 1.0) / n;
    Ok(contrast * contrast * config.cutoff * config.rk().powi(3) / (8.0 * PI * n * n))
}

/// `N = ∫₀^{K/n} dN/dω dω = ((n−1)/n)² (RK)³/(6πn)`.
pub fn analytic_total_number(config: &BubbleConfig) -> Result<f64> {
    config.validate()?;
    let n = config.n();
    let contrast = (n - 1.0) / n;
    Ok(contrast * contrast * config.rk().powi(3) / (6.0 * PI * n))
}

/// Large-volume Bogolubov amplitude coefficient `1/n_from − 1/n_to` (the prefactor of
/// `δ(ω_in − n ω_out)`); its square is what enters `|β|²`.
pub fn large_volume_beta_coefficient(n_from: f64, n_to: f64) -> f64 {
    1.0 / n_from - 1.0 / n_to
}
