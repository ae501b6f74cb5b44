//! In-state radial eigenmodes of the bubble configuration.
//!
//! Inside (r < R, vacuum) the mode is `A J_ν(ω r)`; outside (index n) it is
//! `B J_ν(nω r) + C N_ν(nω r)`. Continuity of the mode and of its radial derivative at
//! r = R fixes the ratios; the overall scale is fixed by `B² + C² = 1`, which gives the
//! exterior the same asymptotic amplitude as the out-modes `J_ν(nω r)`. Sign
//! convention: `B ≥ 0`.
//!
//! The determinant of the matching system is `2/(π ω R)` by the Wronskian identity, so
//! it never vanishes analytically; the numerically evaluated determinant is compared
//! against that value to catch loss of precision.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{
    bessel_j, bessel_j_prime, bessel_n, bessel_n_prime, j_ladder, n_ladder, HalfIntOrder,
    ScaledPair,
};
use crate::units::BubbleConfig;

/// Relative deviation of the numerical matching determinant from `2/(πωR)` that is
/// treated as a degenerate system.
const DETERMINANT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InModeCoefficients {
    pub order: HalfIntOrder,
    pub omega_in: f64,
    /// Interior amplitude (coefficient of `J_ν(ω r)`).
    pub a: f64,
    /// Exterior coefficient of `J_ν(nω r)`.
    pub b: f64,
    /// Exterior coefficient of `N_ν(nω r)`.
    pub c: f64,
}

/// Matching solution in scale-free form.
///
/// With the interior pair `(J_ν(u), J'_ν(u)) = e^{L_in} (ĉ, ŝ)`, the normalized mode has
/// `A e^{L_in} = sign · exp(log_amp)`; `b_dir` and `c_dir` are the exterior
/// coefficients up to the positive factors `exp(log_amp + L_J)` and `exp(log_amp + L_N)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledMatch {
    pub log_amp: f64,
    pub sign: f64,
    pub b_dir: f64,
    pub c_dir: f64,
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    let hi = x.max(y);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((x - hi).exp() + (y - hi).exp()).ln()
}

/// Solves the matching system for one order given the interior pair at `u = ωR` and the
/// exterior pairs at `v = nωR`.
pub(crate) fn match_scaled(
    n: f64,
    u: f64,
    interior: &ScaledPair,
    exterior_j: &ScaledPair,
    exterior_n: &ScaledPair,
) -> Result<ScaledMatch> {
    let (ci, si) = (interior.value_dir, interior.slope_dir);
    let (gj, dgj) = (exterior_j.value_dir, exterior_j.slope_dir);
    let (hn, dhn) = (exterior_n.value_dir, exterior_n.slope_dir);
    let det = 2.0 / (PI * u);

    let wr = gj * dhn - hn * dgj;
    let log_det_numeric = wr.abs().ln() + exterior_j.log_norm + exterior_n.log_norm + n.ln();
    let residual = ((log_det_numeric - det.ln()).exp() * wr.signum() - 1.0).abs();
    if !(residual <= DETERMINANT_TOLERANCE) {
        return Err(Error::Degenerate { residual });
    }

    // B ∝ e^{L_N} (n ĉ ĥ' − ĥ ŝ), C ∝ e^{L_J} (ĝ ŝ − n ĝ' ĉ)
    let b_dir = n * ci * dhn - hn * si;
    let c_dir = gj * si - n * dgj * ci;
    let log_sq = log_add_exp(
        2.0 * (exterior_n.log_norm + b_dir.abs().ln()),
        2.0 * (exterior_j.log_norm + c_dir.abs().ln()),
    );
    if !log_sq.is_finite() {
        return Err(Error::Degenerate {
            residual: f64::INFINITY,
        });
    }
    let sign = if b_dir < 0.0 { -1.0 } else { 1.0 };
    Ok(ScaledMatch {
        log_amp: det.ln() - 0.5 * log_sq,
        sign,
        b_dir: sign * b_dir / det,
        c_dir: sign * c_dir / det,
    })
}

fn check_frequency(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

/// Solves the matching conditions for the in-mode of order `order` at `omega_in`.
pub fn solve_matching(
    config: &BubbleConfig,
    order: HalfIntOrder,
    omega_in: f64,
) -> Result<InModeCoefficients> {
    config.validate()?;
    config.require_vacuum_interior()?;
    check_frequency("omega_in", omega_in)?;
    let n = config.n();
    let l = order.l() as usize;
    let u = omega_in * config.radius;
    let v = n * u;
    let interior = j_ladder(u, l)?[l];
    let exterior_j = j_ladder(v, l)?[l];
    let exterior_n = n_ladder(v, l)?[l];
    let m = match_scaled(n, u, &interior, &exterior_j, &exterior_n)?;
    Ok(InModeCoefficients {
        order,
        omega_in,
        a: m.sign * (m.log_amp - interior.log_norm).exp(),
        b: m.b_dir * (m.log_amp + exterior_n.log_norm).exp(),
        c: m.c_dir * (m.log_amp + exterior_j.log_norm).exp(),
    })
}

/// Radial in-mode `G_in(r)` for solved coefficients.
pub fn in_mode_value(config: &BubbleConfig, coeffs: &InModeCoefficients, r: f64) -> Result<f64> {
    check_frequency("r", r)?;
    let order = coeffs.order;
    let w = coeffs.omega_in;
    if r < config.radius {
        Ok(coeffs.a * bessel_j(order, w * r)?)
    } else {
        let x = config.n() * w * r;
        Ok(coeffs.b * bessel_j(order, x)? + coeffs.c * bessel_n(order, x)?)
    }
}

/// Out-state radial mode `J_ν(n ω_out r)` of the homogeneous medium.
pub fn out_mode_value(
    config: &BubbleConfig,
    order: HalfIntOrder,
    omega_out: f64,
    r: f64,
) -> Result<f64> {
    check_frequency("r", r)?;
    bessel_j(order, config.n() * omega_out * r)
}

/// Relative residuals of the two continuity equations (value and radial derivative) with
/// the coefficients substituted back, each scaled by its largest term.
pub fn matching_residuals(
    config: &BubbleConfig,
    coeffs: &InModeCoefficients,
) -> Result<(f64, f64)> {
    let o = coeffs.order;
    let w = coeffs.omega_in;
    let n = config.n();
    let u = w * config.radius;
    let v = n * u;
    let lhs0 = coeffs.a * bessel_j(o, u)?;
    let rhs0 = [coeffs.b * bessel_j(o, v)?, coeffs.c * bessel_n(o, v)?];
    let lhs1 = coeffs.a * w * bessel_j_prime(o, u)?;
    let rhs1 = [
        coeffs.b * n * w * bessel_j_prime(o, v)?,
        coeffs.c * n * w * bessel_n_prime(o, v)?,
    ];
    let scale0 = lhs0.abs().max(rhs0[0].abs()).max(rhs0[1].abs());
    let scale1 = lhs1.abs().max(rhs1[0].abs()).max(rhs1[1].abs());
    Ok((
        (lhs0 - rhs0[0] - rhs0[1]).abs() / scale0,
        (lhs1 - rhs1[0] - rhs1[1]).abs() / scale1,
    ))
}
