//! Adiabatic suppression: a refractive-index change over a finite time `τ` damps the
//! emission at frequency ω by `exp(−ωτ)`. The factor multiplies the number spectrum.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::spectrum::Spectrum;
use crate::units::{femtoseconds_to_internal, time_to_internal};

/// Change timescale, stored in internal time units (µm).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimescaleModel {
    pub tau: f64,
    pub description: String,
}

impl TimescaleModel {
    pub fn new(tau_internal: f64, description: impl Into<String>) -> Result<Self> {
        if !(tau_internal >= 0.0 && tau_internal.is_finite()) {
            return Err(invalid(
                "tau",
                format!("must be finite and >= 0, got {tau_internal}"),
            ));
        }
        Ok(TimescaleModel {
            tau: tau_internal,
            description: description.into(),
        })
    }

    pub fn from_seconds(tau_s: f64) -> Result<Self> {
        Self::new(
            time_to_internal(tau_s),
            format!("exp(-omega tau), tau = {tau_s:e} s"),
        )
    }

    pub fn from_femtoseconds(tau_fs: f64) -> Result<Self> {
        Self::new(
            femtoseconds_to_internal(tau_fs),
            format!("exp(-omega tau), tau = {tau_fs} fs"),
        )
    }

    pub fn sudden() -> Self {
        TimescaleModel {
            tau: 0.0,
            description: "sudden change, no suppression".to_string(),
        }
    }
}

/// `exp(−ωτ)` for internal frequency and time.
pub fn suppression_factor(omega: f64, tau: f64) -> f64 {
    (-omega * tau).exp()
}

/// Multiplies `dN/dω` pointwise by the suppression factor and re-integrates the totals.
pub fn apply_suppression(spectrum: &Spectrum, model: &TimescaleModel) -> Spectrum {
    if model.tau == 0.0 {
        return spectrum.clone();
    }
    spectrum.map_density(|w, v| v * suppression_factor(w, model.tau))
}

/// `N(τ)/N(0)`, or 0 for an empty spectrum.
pub fn survival_ratio(spectrum: &Spectrum, model: &TimescaleModel) -> f64 {
    if spectrum.total_n <= 0.0 {
        return 0.0;
    }
    apply_suppression(spectrum, model).total_n / spectrum.total_n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::QuadratureReport;
    use crate::units::omega_to_internal;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn toy_spectrum() -> Spectrum {
        let w: Vec<f64> = (1..=64).map(|i| i as f64 * 0.05).collect();
        let v = w.iter().map(|x| x * x).collect();
        let report = QuadratureReport {
            requested_rel_tol: 0.0,
            kernel_rel_tol: 0.0,
            worst_rel_error: 0.0,
            total_n_error: 0.0,
            kernel_evaluations: 0,
        };
        Spectrum::from_samples(w, v, report).unwrap()
    }

    #[test]
    fn femtosecond_figures() {
        let w = omega_to_internal(1e15).unwrap();
        let ten = TimescaleModel::from_femtoseconds(10.0).unwrap();
        assert_relative_eq!(
            suppression_factor(w, ten.tau),
            (-10.0f64).exp(),
            max_relative = 1e-12
        );
        let one = TimescaleModel::from_femtoseconds(1.0).unwrap();
        assert_relative_eq!(
            suppression_factor(w, one.tau),
            0.367_879_441_171_442_3,
            max_relative = 1e-12
        );
        assert_eq!(suppression_factor(w, 0.0), 1.0);
        assert_relative_eq!(
            TimescaleModel::from_seconds(1e-14).unwrap().tau,
            ten.tau,
            max_relative = 1e-14
        );
    }

    #[test]
    fn sudden_limit_is_identity() {
        let s = toy_spectrum();
        assert_eq!(apply_suppression(&s, &TimescaleModel::sudden()), s);
        assert_eq!(
            apply_suppression(&s, &TimescaleModel::new(0.0, "").unwrap()).total_n,
            s.total_n
        );
    }

    #[test]
    fn rejects_negative_tau() {
        assert!(TimescaleModel::new(-1.0, "").is_err());
        assert!(TimescaleModel::from_femtoseconds(f64::NAN).is_err());
    }

    #[test]
    fn totals_decrease_with_tau() {
        let s = toy_spectrum();
        let mut prev = f64::INFINITY;
        for tau in [0.0, 0.1, 1.0, 10.0] {
            let n = apply_suppression(&s, &TimescaleModel::new(tau, "").unwrap()).total_n;
            assert!(n < prev);
            prev = n;
        }
        assert!(survival_ratio(&s, &TimescaleModel::new(1.0, "").unwrap()) < 1.0);
    }

    proptest! {
        #[test]
        fn factor_in_unit_interval(w in 0.0f64..1e3, tau in 0.0f64..1e3) {
            let f = suppression_factor(w, tau);
            prop_assert!((0.0..=1.0).contains(&f));
        }

        #[test]
        fn strictly_decreasing(x in 0.0f64..600.0, dx in 1e-3f64..10.0) {
            prop_assert!(suppression_factor(x + dx, 1.0) < suppression_factor(x, 1.0));
        }

        #[test]
        fn semigroup(t1 in 0.0f64..2.0, t2 in 0.0f64..2.0) {
            let s = toy_spectrum();
            let m1 = TimescaleModel::new(t1, "").unwrap();
            let m2 = TimescaleModel::new(t2, "").unwrap();
            let m12 = TimescaleModel::new(t1 + t2, "").unwrap();
            let twice = apply_suppression(&apply_suppression(&s, &m1), &m2);
            let once = apply_suppression(&s, &m12);
            for (a, b) in twice.dn_domega.iter().zip(&once.dn_domega) {
                prop_assert!((a - b).abs() <= 1e-13 * b.abs().max(1e-300));
            }
        }
    }
}
