//! Squared Bogolubov coefficient between the bubble ("in") and homogeneous ("out")
//! configurations, summed over angular momentum:
//!
//! ```text
//! |β(ω_in, ω_out)|² = P² Σ_ν (2ν) |A_ν|² [W[J_ν(nω_out r), J_ν(ω_in r)]_R / ((nω_out)² − ω_in²)]²
//! P = (n² − 1)/n² · ω_in² R / (ω_out + ω_in)
//! ```
//!
//! The oscillating phase `e^{i(ω_out+ω_in)t}` of the amplitude has unit modulus and does
//! not appear in `|β|²`. Above the cutoff (`n ω_out > K`) the medium is vacuum-like and the
//! kernel is identically zero.
//!
//! The ν-sum starts checking for convergence at `l = ⌈n ω_out R⌉`, where the out-mode
//! turns evanescent inside the bubble, and stops once three consecutive terms fall below
//! `rel_tol` times the partial sum.

use crate::error::{Error, Result};
use crate::modes::match_scaled;
use crate::specfun::{cross_ratio_from_pairs, j_ladder, n_ladder, HalfIntOrder, ScaledPair};
use crate::units::BubbleConfig;

/// Default truncation tolerance for single kernel evaluations.
pub const KERNEL_REL_TOL: f64 = 1e-6;
/// Default truncation tolerance inside spectrum scans.
pub const SCAN_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub rel_tol: f64,
    /// Hard limit on the angular momentum; `None` means `10·l_start + 100`.
    pub l_cap: Option<u32>,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            rel_tol: KERNEL_REL_TOL,
            l_cap: None,
        }
    }
}

impl KernelOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        KernelOptions {
            rel_tol,
            l_cap: None,
        }
    }
}

/// One evaluated value of `|β(ω_in, ω_out)|²` with its truncation record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaKernel {
    pub omega_in: f64,
    pub omega_out: f64,
    /// `|β|²`, a density per unit ω_in per unit ω_out (units of length²).
    pub value: f64,
    /// Highest angular momentum included.
    pub l_used: u32,
    /// Bound on the neglected tail of the ν-sum.
    pub tail_estimate: f64,
}

/// The squared prefactor `((n²−1)/n² · ω_in² R/(ω_out+ω_in))²`.
pub fn prefactor_squared(n: f64, radius: f64, omega_in: f64, omega_out: f64) -> f64 {
    let p = (n * n - 1.0) / (n * n) * omega_in * omega_in * radius / (omega_out + omega_in);
    p * p
}

fn check_positive(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

/// Per-(l) pieces that depend only on ω_in.
struct InteriorLadders {
    interior: Vec<ScaledPair>,
    exterior_j: Vec<ScaledPair>,
    exterior_n: Vec<ScaledPair>,
}

impl InteriorLadders {
    fn new(n: f64, u: f64, lmax: usize) -> Result<Self> {
        Ok(InteriorLadders {
            interior: j_ladder(u, lmax)?,
            exterior_j: j_ladder(n * u, lmax)?,
            exterior_n: n_ladder(n * u, lmax)?,
        })
    }
}

/// `ln |A_ν X_ν|` where `X_ν` is the cross-Wronskian ratio, or `-inf` when the product
/// vanishes or underflows.
#[allow(clippy::too_many_arguments)]
fn log_amplitude_overlap(
    n: f64,
    radius: f64,
    l: usize,
    a: f64,
    b: f64,
    out_pair: &ScaledPair,
    ladders: &InteriorLadders,
) -> Result<f64> {
    let u = b * radius;
    let interior = &ladders.interior[l];
    let m = match_scaled(
        n,
        u,
        interior,
        &ladders.exterior_j[l],
        &ladders.exterior_n[l],
    )?;
    let xi = cross_ratio_from_pairs(
        l as f64 + 0.5,
        a,
        b,
        radius,
        (out_pair.value_dir, out_pair.slope_dir),
        (interior.value_dir, interior.slope_dir),
    );
    if xi == 0.0 || out_pair.log_norm == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(m.log_amp + out_pair.log_norm + xi.abs().ln())
}

/// The contribution of a single order ν to `|β|²`, prefactor included:
/// `P² (2ν) |A_ν|² X_ν²`. Equivalently `(2ν) |(ω_in − ω_out) ∫₀^∞ G_out G_in r dr|²`.
pub fn beta_squared_term(
    config: &BubbleConfig,
    order: HalfIntOrder,
    omega_in: f64,
    omega_out: f64,
) -> Result<f64> {
    config.validate()?;
    config.require_vacuum_interior()?;
    check_positive("omega_in", omega_in)?;
    check_positive("omega_out", omega_out)?;
    let n = config.n();
    let r = config.radius;
    let l = order.l() as usize;
    let a = n * omega_out;
    let out_pair = j_ladder(a * r, l)?[l];
    let ladders = InteriorLadders::new(n, omega_in * r, l)?;
    let log_ax = log_amplitude_overlap(n, r, l, a, omega_in, &out_pair, &ladders)?;
    Ok(prefactor_squared(n, r, omega_in, omega_out) * 2.0 * order.nu() * (2.0 * log_ax).exp())
}

/// Kernel evaluator for a fixed ω_out; caches the out-mode ladder so that sweeps over
/// ω_in only rebuild the ω_in-dependent pieces.
#[derive(Debug, Clone)]
pub struct OutModeKernel {
    n: f64,
    radius: f64,
    omega_out: f64,
    below_cutoff: bool,
    opts: KernelOptions,
    l_start: u32,
    l_cap: u32,
    out_ladder: Vec<ScaledPair>,
}

impl OutModeKernel {
    pub fn new(config: &BubbleConfig, omega_out: f64, opts: KernelOptions) -> Result<Self> {
        config.validate()?;
        config.require_vacuum_interior()?;
        check_positive("omega_out", omega_out)?;
        if !(opts.rel_tol > 0.0 && opts.rel_tol < 1.0) {
            return Err(Error::Domain {
                what: "rel_tol",
                value: opts.rel_tol,
            });
        }
        let n = config.n();
        let radius = config.radius;
        let a = n * omega_out;
        let below_cutoff = a <= config.cutoff;
        let l_start = (a * radius).ceil() as u32;
        let l_cap = opts.l_cap.unwrap_or(10 * l_start + 100);
        let out_ladder = if below_cutoff && n != 1.0 {
            j_ladder(a * radius, Self::initial_lmax(l_start, l_cap))?
        } else {
            Vec::new()
        };
        Ok(OutModeKernel {
            n,
            radius,
            omega_out,
            below_cutoff,
            opts,
            l_start,
            l_cap,
            out_ladder,
        })
    }

    fn initial_lmax(l_start: u32, l_cap: u32) -> usize {
        let guess = l_start as f64 + 10.0 + 4.0 * (l_start as f64).cbrt();
        (guess.ceil() as u32).min(l_cap) as usize
    }

    /// The order at which the stop rule starts being checked, `⌈n ω_out R⌉`.
    pub fn l_start(&self) -> u32 {
        self.l_start
    }

    pub fn omega_out(&self) -> f64 {
        self.omega_out
    }

    pub fn evaluate(&self, omega_in: f64) -> Result<BetaKernel> {
        check_positive("omega_in", omega_in)?;
        let zero = BetaKernel {
            omega_in,
            omega_out: self.omega_out,
            value: 0.0,
            l_used: 0,
            tail_estimate: 0.0,
        };
        if !self.below_cutoff || self.n == 1.0 {
            return Ok(zero);
        }
        let (n, radius) = (self.n, self.radius);
        let a = n * self.omega_out;
        let u = omega_in * radius;
        let rel_tol = self.opts.rel_tol;
        let check_from = self.l_start.max(2) as usize;

        let mut partial = 0.0;
        let mut window = [0.0f64; 3];
        let mut l = 0usize;
        let mut lmax = Self::initial_lmax(self.l_start, self.l_cap);
        loop {
            let ladders = InteriorLadders::new(n, u, lmax)?;
            let extended;
            let out_ladder = if self.out_ladder.len() > lmax {
                &self.out_ladder
            } else {
                extended = j_ladder(a * radius, lmax)?;
                &extended
            };
            while l <= lmax {
                let log_ax =
                    log_amplitude_overlap(n, radius, l, a, omega_in, &out_ladder[l], &ladders)?;
                let term = (2 * l + 1) as f64 * (2.0 * log_ax).exp();
                partial += term;
                window = [window[1], window[2], term];
                if l >= check_from {
                    let max3 = window.iter().copied().fold(0.0, f64::max);
                    if max3 <= rel_tol * partial {
                        let ratio = if window[1] > 0.0 {
                            term / window[1]
                        } else {
                            0.0
                        };
                        if ratio <= 0.5 {
                            let p2 = prefactor_squared(n, radius, omega_in, self.omega_out);
                            return Ok(BetaKernel {
                                value: p2 * partial,
                                l_used: l as u32,
                                tail_estimate: p2 * term * ratio / (1.0 - ratio),
                                ..zero
                            });
                        }
                    }
                }
                if l as u32 >= self.l_cap {
                    return Err(Error::Truncation {
                        l_cap: self.l_cap,
                        last_term: term,
                        partial_sum: partial,
                    });
                }
                l += 1;
            }
            lmax = (2 * lmax + 16).min(self.l_cap as usize);
        }
    }
}

/// `|β(ω_in, ω_out)|²` with the ν-sum truncated at relative tolerance `rel_tol`.
pub fn beta_squared(
    config: &BubbleConfig,
    omega_in: f64,
    omega_out: f64,
    rel_tol: f64,
) -> Result<BetaKernel> {
    beta_squared_with(
        config,
        omega_in,
        omega_out,
        KernelOptions::with_rel_tol(rel_tol),
    )
}

pub fn beta_squared_with(
    config: &BubbleConfig,
    omega_in: f64,
    omega_out: f64,
    opts: KernelOptions,
) -> Result<BetaKernel> {
    OutModeKernel::new(config, omega_out, opts)?.evaluate(omega_in)
}
