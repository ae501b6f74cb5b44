//! Globally adaptive 15-point Gauss–Kronrod quadrature.
//!
//! Intervals are kept in a max-heap keyed on their error estimate; the worst one is
//! bisected until the summed estimate meets `max(abs_tol, rel_tol·|I|)`. Callers pass
//! initial breakpoints to place known features (peaks, oscillation scale) up front.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod abscissae XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &F, lo: f64, hi: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    resasc *= half.abs();
    let value = kron * half;
    let mut error = ((kron - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * value.abs();
    Ok(Segment {
        lo,
        hi,
        value,
        error: error.max(roundoff),
    })
}

/// Integrates `f` over `[lo, hi]`, pre-splitting at the interior `breakpoints`.
pub fn integrate<F>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut edges: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(lo);
    edges.extend(breakpoints.iter().copied().filter(|&x| x > lo && x < hi));
    edges.push(hi);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let seg = kronrod(&f, w[0], w[1])?;
        evaluations += 15;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            let worst = heap.peek().copied().expect("non-empty heap");
            return Err(Error::Quadrature {
                error_estimate: total_err,
                target,
                worst_lo: worst.lo,
                worst_hi: worst.hi,
                worst_error: worst.error,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval can no longer be split in floating point.
            return Err(Error::Quadrature {
                error_estimate: total_err,
                target,
                worst_lo: worst.lo,
                worst_hi: worst.hi,
                worst_error: worst.error,
            });
        }
        let left = kronrod(&f, worst.lo, mid)?;
        let right = kronrod(&f, mid, worst.hi)?;
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the incremental updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadResult {
        value,
        error,
        intervals: heap.len(),
        evaluations,
    })
}

/// Composite trapezoid rule over tabulated samples.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(
            |x| Ok(x.powi(7) - 3.0 * x * x),
            0.0,
            2.0,
            &[],
            &QuadOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 256.0 / 8.0 - 8.0, max_relative = 1e-14);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn peaked_integrand_converges() {
        let eps: f64 = 1e-3;
        let r = integrate(
            |x| Ok(eps / (x * x + eps * eps)),
            -1.0,
            1.0,
            &[0.0],
            &QuadOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 2.0 * (1.0 / eps).atan(), max_relative = 1e-10);
    }

    #[test]
    fn oscillatory_integrand() {
        let r = integrate(
            |x| Ok((50.0 * x).sin().powi(2)),
            0.0,
            PI,
            &[],
            &QuadOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, PI / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn non_convergence_reports_worst_interval() {
        let opts = QuadOptions {
            max_intervals: 4,
            ..QuadOptions::default()
        };
        let err = integrate(|x| Ok(1.0 / x.sqrt()), 0.0, 1.0, &[], &opts).unwrap_err();
        match err {
            Error::Quadrature { worst_lo, .. } => assert_eq!(worst_lo, 0.0),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn integrand_errors_propagate() {
        let err = integrate(
            |_| {
                Err(Error::Domain {
                    what: "x",
                    value: 0.0,
                })
            },
            0.0,
            1.0,
            &[],
            &QuadOptions::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn trapezoid_linear_exact() {
        let x = [0.0, 0.5, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert_relative_eq!(trapezoid(&x, &y), 12.0, max_relative = 1e-15);
    }
}
