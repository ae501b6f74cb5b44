//! Emitted number spectrum `dN/dω_out = ∫ |β(ω_in, ω_out)|² dω_in` and its totals.
//!
//! The ω_in integral runs over `(0, K]` by default. It is pre-split every `2/R` (the
//! kernel oscillates in ω_in with period about `π/R`) and at the ridge `ω_in = n ω_out`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::analytic_dn_domega;
use crate::bogolubov::{KernelOptions, OutModeKernel, SCAN_REL_TOL};
use crate::error::{invalid, Error, Result};
use crate::quad::{integrate, trapezoid, QuadOptions};
use crate::units::BubbleConfig;

/// Upper limit of the ω_in integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InDomain {
    /// `(0, K]`
    #[default]
    Cutoff,
    /// `(0, nK]`
    NCutoff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Relative tolerance of the ω_in quadrature.
    pub quad_tol: f64,
    /// Truncation tolerance of the angular-momentum sum.
    pub kernel_rel_tol: f64,
    pub in_domain: InDomain,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            quad_tol: 1e-4,
            kernel_rel_tol: SCAN_REL_TOL,
            in_domain: InDomain::Cutoff,
        }
    }
}

impl SpectrumOptions {
    pub fn with_quad_tol(quad_tol: f64) -> Self {
        SpectrumOptions {
            quad_tol,
            ..SpectrumOptions::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.quad_tol > 0.0 && self.quad_tol < 1.0) {
            return Err(invalid(
                "quad_tol",
                format!("must lie in (0, 1), got {}", self.quad_tol),
            ));
        }
        if !(self.kernel_rel_tol > 0.0 && self.kernel_rel_tol < 1.0) {
            return Err(invalid(
                "kernel_rel_tol",
                format!("must lie in (0, 1), got {}", self.kernel_rel_tol),
            ));
        }
        Ok(())
    }
}

/// A single spectral density value with its quadrature bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub omega_out: f64,
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// `dN/dω_out` at one frequency with default options apart from `quad_tol`.
pub fn dn_domega(config: &BubbleConfig, omega_out: f64, quad_tol: f64) -> Result<f64> {
    Ok(dn_domega_with(config, omega_out, &SpectrumOptions::with_quad_tol(quad_tol))?.value)
}

pub fn dn_domega_with(
    config: &BubbleConfig,
    omega_out: f64,
    opts: &SpectrumOptions,
) -> Result<DensitySample> {
    config.validate()?;
    opts.validate()?;
    if !(omega_out > 0.0 && omega_out.is_finite()) {
        return Err(Error::Domain {
            what: "omega_out",
            value: omega_out,
        });
    }
    let n = config.n();
    let empty = DensitySample {
        omega_out,
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    if n == 1.0 || n * omega_out > config.cutoff {
        return Ok(empty);
    }
    let kernel = OutModeKernel::new(
        config,
        omega_out,
        KernelOptions::with_rel_tol(opts.kernel_rel_tol),
    )?;
    let top = match opts.in_domain {
        InDomain::Cutoff => config.cutoff,
        InDomain::NCutoff => n * config.cutoff,
    };
    let breakpoints = breakpoints(config.radius, top, n * omega_out);
    let quad = QuadOptions {
        abs_tol: 0.0,
        rel_tol: opts.quad_tol,
        max_intervals: 20 * breakpoints.len() + 2000,
    };
    let r = integrate(
        |w| Ok(kernel.evaluate(w)?.value),
        0.0,
        top,
        &breakpoints,
        &quad,
    )?;
    Ok(DensitySample {
        omega_out,
        value: r.value.max(0.0),
        error: r.error,
        evaluations: r.evaluations,
    })
}

fn breakpoints(radius: f64, top: f64, ridge: f64) -> Vec<f64> {
    let step = 2.0 / radius;
    let count = (top / step).floor() as usize;
    let mut points: Vec<f64> = (1..=count).map(|i| i as f64 * step).collect();
    points.push(ridge);
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    #[default]
    Log,
    Linear,
}

/// Output frequency grid over `(0, K/n]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    pub scale: GridScale,
    /// Lowest log-grid frequency as a fraction of `K/n`.
    pub min_fraction: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points: 256,
            scale: GridScale::Log,
            min_fraction: 1e-2,
        }
    }
}

pub const MIN_GRID_POINTS: usize = 32;

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < MIN_GRID_POINTS {
            return Err(invalid(
                "grid.points",
                format!("need at least {MIN_GRID_POINTS}, got {}", self.points),
            ));
        }
        if !(self.min_fraction > 0.0 && self.min_fraction < 1.0) {
            return Err(invalid(
                "grid.min_fraction",
                format!("must lie in (0, 1), got {}", self.min_fraction),
            ));
        }
        Ok(())
    }

    /// Ascending frequencies ending exactly at `top`.
    pub fn frequencies(&self, top: f64) -> Result<Vec<f64>> {
        self.validate()?;
        let m = self.points;
        let mut grid: Vec<f64> = match self.scale {
            GridScale::Log => {
                let lo = self.min_fraction.ln();
                (0..m)
                    .map(|i| top * (lo * (1.0 - i as f64 / (m - 1) as f64)).exp())
                    .collect()
            }
            GridScale::Linear => (1..=m).map(|i| top * i as f64 / m as f64).collect(),
        };
        grid[m - 1] = top;
        Ok(grid)
    }
}

/// Achieved accuracy of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureReport {
    pub requested_rel_tol: f64,
    pub kernel_rel_tol: f64,
    /// Largest per-point error estimate relative to that point's value.
    pub worst_rel_error: f64,
    /// Sum of per-point error estimates propagated through the trapezoid weights.
    pub total_n_error: f64,
    pub kernel_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omega_grid: Vec<f64>,
    pub dn_domega: Vec<f64>,
    pub total_n: f64,
    pub total_e: f64,
    pub quadrature_report: QuadratureReport,
}

impl Spectrum {
    /// Builds a spectrum from samples; totals are trapezoid integrals over `[0, ω_max]`
    /// with the density taken as 0 at ω = 0.
    pub fn from_samples(
        omega_grid: Vec<f64>,
        dn_domega: Vec<f64>,
        quadrature_report: QuadratureReport,
    ) -> Result<Self> {
        if omega_grid.len() != dn_domega.len() {
            return Err(invalid(
                "dn_domega",
                format!(
                    "{} samples for {} grid points",
                    dn_domega.len(),
                    omega_grid.len()
                ),
            ));
        }
        if omega_grid.windows(2).any(|w| !(w[1] > w[0]))
            || omega_grid.first().is_some_and(|&w| w <= 0.0)
        {
            return Err(invalid(
                "omega_grid",
                "must be positive and strictly increasing",
            ));
        }
        Ok(Self::assemble(omega_grid, dn_domega, quadrature_report))
    }

    /// Same grid, new density; totals re-integrated.
    pub fn map_density(&self, f: impl Fn(f64, f64) -> f64) -> Spectrum {
        let values = self
            .omega_grid
            .iter()
            .zip(&self.dn_domega)
            .map(|(&w, &v)| f(w, v))
            .collect();
        Self::assemble(self.omega_grid.clone(), values, self.quadrature_report)
    }

    fn assemble(
        omega_grid: Vec<f64>,
        dn_domega: Vec<f64>,
        quadrature_report: QuadratureReport,
    ) -> Spectrum {
        let (x, y) = with_origin(&omega_grid, &dn_domega);
        let total_n = trapezoid(&x, &y);
        let ey: Vec<f64> = x.iter().zip(&y).map(|(w, d)| w * d).collect();
        let total_e = trapezoid(&x, &ey);
        Spectrum {
            omega_grid,
            dn_domega,
            total_n,
            total_e,
            quadrature_report,
        }
    }

    pub fn len(&self) -> usize {
        self.omega_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_grid.is_empty()
    }
}

fn with_origin(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(x.len() + 1);
    let mut ys = Vec::with_capacity(y.len() + 1);
    xs.push(0.0);
    ys.push(0.0);
    xs.extend_from_slice(x);
    ys.extend_from_slice(y);
    (xs, ys)
}

/// Evaluates `dN/dω_out` on the grid in parallel. Each point is computed independently,
/// so the result does not depend on the thread count.
pub fn scan(config: &BubbleConfig, grid: &GridSpec) -> Result<Spectrum> {
    scan_with(config, grid, &SpectrumOptions::default())
}

pub fn scan_with(
    config: &BubbleConfig,
    grid: &GridSpec,
    opts: &SpectrumOptions,
) -> Result<Spectrum> {
    config.validate()?;
    opts.validate()?;
    let omega = grid.frequencies(config.omega_out_max())?;
    let samples: Vec<DensitySample> = omega
        .par_iter()
        .map(|&w| dn_domega_with(config, w, opts))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let worst_rel_error = samples
        .iter()
        .filter(|s| s.value > 0.0)
        .map(|s| s.error / s.value)
        .fold(0.0, f64::max);
    let (x, errs) = with_origin(&omega, &samples.iter().map(|s| s.error).collect::<Vec<_>>());
    let report = QuadratureReport {
        requested_rel_tol: opts.quad_tol,
        kernel_rel_tol: opts.kernel_rel_tol,
        worst_rel_error,
        total_n_error: trapezoid(&x, &errs),
        kernel_evaluations: samples.iter().map(|s| s.evaluations).sum(),
    };
    Spectrum::from_samples(omega, values, report)
}

/// The large-volume density sampled on the same grid as a scan.
pub fn analytic_spectrum(config: &BubbleConfig, grid: &GridSpec) -> Result<Spectrum> {
    config.validate()?;
    let omega = grid.frequencies(config.omega_out_max())?;
    let values = omega
        .iter()
        .map(|&w| analytic_dn_domega(config, w))
        .collect();
    let report = QuadratureReport {
        requested_rel_tol: 0.0,
        kernel_rel_tol: 0.0,
        worst_rel_error: 0.0,
        total_n_error: 0.0,
        kernel_evaluations: 0,
    };
    Spectrum::from_samples(omega, values, report)
}

/// Shape distance `∫ |p − q| dω` between two spectra on a common grid after each is
/// normalized to unit trapezoid area. Lies in `[0, 2]`.
pub fn normalized_l1_distance(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    let same_grid = a.len() == b.len()
        && a.omega_grid
            .iter()
            .zip(&b.omega_grid)
            .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()));
    if !same_grid {
        return Err(invalid("omega_grid", "spectra must share one grid"));
    }
    let (x, ya) = with_origin(&a.omega_grid, &a.dn_domega);
    let (_, yb) = with_origin(&b.omega_grid, &b.dn_domega);
    let na = trapezoid(&x, &ya);
    let nb = trapezoid(&x, &yb);
    if !(na > 0.0 && nb > 0.0) {
        return Err(invalid(
            "dn_domega",
            "cannot normalize a spectrum with zero area",
        ));
    }
    let diff: Vec<f64> = ya
        .iter()
        .zip(&yb)
        .map(|(p, q)| (p / na - q / nb).abs())
        .collect();
    Ok(trapezoid(&x, &diff))
}

/// Same shape distance with both spectra expressed on the dimensionless axis `ω/ω_max`,
/// so configurations of different size can be compared.
pub fn normalized_l1_distance_scaled(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    let rescale = |s: &Spectrum| -> Spectrum {
        let top = s.omega_grid.last().copied().unwrap_or(1.0);
        Spectrum {
            omega_grid: s.omega_grid.iter().map(|w| w / top).collect(),
            ..s.clone()
        }
    };
    normalized_l1_distance(&rescale(a), &rescale(b))
}
