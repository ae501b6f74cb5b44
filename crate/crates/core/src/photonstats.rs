//! Pair-counting statistics that separate thermal from two-mode squeezed light through
//! the variance of `N_ab = N_a − N_b`.
//!
//! Both kinds have Bose–Einstein (geometric) single-mode marginals. Thermal light draws
//! the two modes independently; squeezed light emits photons in pairs, so `n_a = n_b`.
//!
//! Estimators accumulate exact integer moments, so algebraically equal expressions agree
//! bit for bit and a perfectly correlated ensemble has variance exactly 0.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    ThermalIndependent,
    TwoModeSqueezed,
}

impl PairKind {
    pub const ALL: [PairKind; 2] = [PairKind::ThermalIndependent, PairKind::TwoModeSqueezed];

    pub fn name(self) -> &'static str {
        match self {
            PairKind::ThermalIndependent => "thermal-independent",
            PairKind::TwoModeSqueezed => "two-mode-squeezed",
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "thermal" | "thermal-independent" | "thermal_independent" => {
                Ok(PairKind::ThermalIndependent)
            }
            "squeezed" | "two-mode-squeezed" | "two_mode_squeezed" => Ok(PairKind::TwoModeSqueezed),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

fn check_mean(field: &str, mean: f64) -> Result<()> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(invalid(
            field,
            format!("must be finite and >= 0, got {mean}"),
        ));
    }
    Ok(())
}

/// Closed-form `Δ(N_ab)²`: `⟨N_a⟩(⟨N_a⟩+1) + ⟨N_b⟩(⟨N_b⟩+1)` for thermal light, 0 for a
/// two-mode squeezed state.
pub fn theoretical_variance(kind: PairKind, mean_a: f64, mean_b: f64) -> Result<f64> {
    check_mean("mean_a", mean_a)?;
    check_mean("mean_b", mean_b)?;
    Ok(match kind {
        PairKind::ThermalIndependent => mean_a * (mean_a + 1.0) + mean_b * (mean_b + 1.0),
        PairKind::TwoModeSqueezed => 0.0,
    })
}

/// Single-mode thermal variance `⟨N⟩(⟨N⟩+1)`.
pub fn thermal_marginal_variance(mean: f64) -> f64 {
    mean * (mean + 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEnsemble {
    pub kind: PairKind,
    pub mean_occupation: f64,
    pub seed: u64,
    pub samples: Vec<(u64, u64)>,
}

/// Draws `count` photon-number pairs. Same `(kind, mean, count, seed)` gives the same
/// ensemble on every platform.
pub fn sample(
    kind: PairKind,
    mean_occupation: f64,
    count: usize,
    seed: u64,
) -> Result<PairEnsemble> {
    check_mean("mean_occupation", mean_occupation)?;
    if count == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let marginal = Geometric::new(1.0 / (1.0 + mean_occupation))
        .map_err(|e| invalid("mean_occupation", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..count)
        .map(|_| match kind {
            PairKind::ThermalIndependent => (marginal.sample(&mut rng), marginal.sample(&mut rng)),
            PairKind::TwoModeSqueezed => {
                let n = marginal.sample(&mut rng);
                (n, n)
            }
        })
        .collect();
    Ok(PairEnsemble {
        kind,
        mean_occupation,
        seed,
        samples,
    })
}

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: f64,
}

impl Estimate {
    /// Distance from `target` in standard errors; 0 when both coincide exactly.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.value - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.standard_error
        }
    }
}

/// Exact power sums of an integer series.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: i128,
    sum: i128,
    sum_sq: i128,
}

impl Moments {
    fn of(values: impl Iterator<Item = i128>) -> Self {
        values.fold(Moments::default(), |m, x| Moments {
            count: m.count + 1,
            sum: m.sum + x,
            sum_sq: m.sum_sq + x * x,
        })
    }

    fn without(&self, x: i128) -> Self {
        Moments {
            count: self.count - 1,
            sum: self.sum - x,
            sum_sq: self.sum_sq - x * x,
        }
    }

    /// Unbiased sample variance; infinite for a single value.
    fn variance(&self) -> f64 {
        if self.count < 2 {
            return f64::INFINITY;
        }
        let numerator = self.count * self.sum_sq - self.sum * self.sum;
        numerator as f64 / (self.count * (self.count - 1)) as f64
    }
}

fn require_samples(needed: usize, got: usize) -> Result<()> {
    if got < needed {
        return Err(Error::TooFewSamples { needed, got });
    }
    Ok(())
}

/// Unbiased variance with a delete-one jackknife standard error.
fn variance_estimate(values: &[i128]) -> Result<Estimate> {
    require_samples(2, values.len())?;
    let all = Moments::of(values.iter().copied());
    let value = all.variance();
    if values.len() == 2 {
        return Ok(Estimate {
            value,
            standard_error: f64::INFINITY,
        });
    }
    let loo: Vec<f64> = values.iter().map(|&x| all.without(x).variance()).collect();
    let n = values.len() as f64;
    let mean = loo.iter().sum::<f64>() / n;
    let spread: f64 = loo.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(Estimate {
        value,
        standard_error: ((n - 1.0) / n * spread).sqrt(),
    })
}

impl PairEnsemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn differences(&self) -> Vec<i128> {
        self.samples
            .iter()
            .map(|&(a, b)| a as i128 - b as i128)
            .collect()
    }
}

/// Sample variance of `n_a − n_b` with jackknife standard error.
pub fn variance_nab(ensemble: &PairEnsemble) -> Result<Estimate> {
    variance_estimate(&ensemble.differences())
}

/// `ΔN_a² + ΔN_b² − 2⟨N_a N_b⟩ + 2⟨N_a⟩⟨N_b⟩` from floating-point sample moments, with
/// the same `m/(m−1)` bias correction as [`variance_nab`].
pub fn four_term_variance(ensemble: &PairEnsemble) -> Result<f64> {
    require_samples(2, ensemble.len())?;
    let m = ensemble.len() as f64;
    let mean = |f: &dyn Fn(f64, f64) -> f64| {
        ensemble
            .samples
            .iter()
            .map(|&(a, b)| f(a as f64, b as f64))
            .sum::<f64>()
            / m
    };
    let (ma, mb) = (mean(&|a, _| a), mean(&|_, b| b));
    let var_a = mean(&|a, _| a * a) - ma * ma;
    let var_b = mean(&|_, b| b * b) - mb * mb;
    let ab = mean(&|a, b| a * b);
    Ok((var_a + var_b - 2.0 * ab + 2.0 * ma * mb) * m / (m - 1.0))
}

/// Single-mode variance of `n_a` with jackknife standard error.
pub fn marginal_variance(ensemble: &PairEnsemble) -> Result<Estimate> {
    let values: Vec<i128> = ensemble.samples.iter().map(|&(a, _)| a as i128).collect();
    variance_estimate(&values)
}

/// Sample mean of `n_a` with standard error `s/√m`.
pub fn marginal_mean(ensemble: &PairEnsemble) -> Result<Estimate> {
    require_samples(2, ensemble.len())?;
    let m = Moments::of(ensemble.samples.iter().map(|&(a, _)| a as i128));
    Ok(Estimate {
        value: m.sum as f64 / m.count as f64,
        standard_error: (m.variance() / m.count as f64).sqrt(),
    })
}
