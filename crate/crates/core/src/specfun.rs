//! Cylinder functions of half-integer order ν = l + ½.
//!
//! Everything is built on the spherical Bessel functions, `J_{l+½}(x) = √(2x/π) j_l(x)`
//! and `N_{l+½}(x) = √(2x/π) y_l(x)`, whose l = −1, 0 members are elementary:
//! `j_{−1} = cos x / x`, `j_0 = sin x / x`, `y_{−1} = sin x / x`, `y_0 = −cos x / x`.
//! `y_l` is generated by upward recurrence; `j_l` by normalized downward (Miller)
//! recurrence, which stays accurate in the evanescent region `l > x` where upward
//! recurrence for `j_l` loses every digit.
//!
//! The ladders keep a running logarithmic offset so that very small `J` and very large
//! `N` (`l ≫ x`) never underflow or overflow while the recurrence is running. Callers
//! that need to combine such values safely can work with [`ScaledPair`] directly.

use std::f64::consts::{LN_10, PI};

use crate::error::{Error, Result};

/// Relative frequency separation below which the cross-Wronskian ratio switches to its
/// Lommel diagonal form.
pub const RESONANCE_GUARD: f64 = 1.0e-6;

const RESCALE_AT: f64 = 1.0e250;
const LN_RESCALE: f64 = 250.0 * LN_10;

/// Half-integer Bessel order ν = l + ½.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfIntOrder(u32);

impl HalfIntOrder {
    pub const fn new(l: u32) -> Self {
        HalfIntOrder(l)
    }

    /// Angular momentum l.
    pub const fn l(self) -> u32 {
        self.0
    }

    pub fn nu(self) -> f64 {
        self.0 as f64 + 0.5
    }
}

impl From<u32> for HalfIntOrder {
    fn from(l: u32) -> Self {
        HalfIntOrder(l)
    }
}

/// A function value and its argument derivative stored as
/// `exp(log_norm) · (value_dir, slope_dir)` with `value_dir² + slope_dir² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPair {
    pub log_norm: f64,
    pub value_dir: f64,
    pub slope_dir: f64,
}

impl ScaledPair {
    pub fn value(&self) -> f64 {
        self.value_dir * self.log_norm.exp()
    }

    pub fn derivative(&self) -> f64 {
        self.slope_dir * self.log_norm.exp()
    }

    /// Builds the pair for `f_ν` from the spherical members `f_{l−1}`, `f_l`, given as
    /// mantissas with their rescale counts. The true values are
    /// `mantissa · mult · RESCALE_AT^(count − base_count)`.
    fn from_spherical(
        nu: f64,
        x: f64,
        (lower, lower_count): (f64, i32),
        (upper, upper_count): (f64, i32),
        mult: f64,
        base_count: i32,
    ) -> Self {
        let common = lower_count.max(upper_count);
        let mut prev = lower * RESCALE_AT.powi(lower_count - common);
        let mut cur = upper * RESCALE_AT.powi(upper_count - common);
        let scale = prev.abs().max(cur.abs());
        if scale == 0.0 || mult == 0.0 {
            return ScaledPair {
                log_norm: f64::NEG_INFINITY,
                value_dir: 0.0,
                slope_dir: 0.0,
            };
        }
        prev /= scale;
        cur /= scale;
        let val = cur;
        let der = prev - nu / x * cur;
        let norm = val.hypot(der);
        let magnitude = norm * scale * mult.abs();
        let log_mag = if magnitude.is_finite() && magnitude > 0.0 {
            magnitude.ln()
        } else {
            norm.ln() + scale.ln() + mult.abs().ln()
        };
        let sign = mult.signum();
        ScaledPair {
            log_norm: log_mag
                + f64::from(common - base_count) * LN_RESCALE
                + 0.5 * (2.0 * x / PI).ln(),
            value_dir: sign * val / norm,
            slope_dir: sign * der / norm,
        }
    }
}

fn check_argument(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Bessel argument",
            value: x,
        })
    }
}

fn miller_start(x: f64, lmax: usize) -> usize {
    let top = (lmax as f64).max(x);
    top.ceil() as usize + 25 + (18.0 * top.cbrt()).ceil() as usize
}

/// `(J_ν(x), J'_ν(x))` for l = 0..=lmax.
pub fn j_ladder(x: f64, lmax: usize) -> Result<Vec<ScaledPair>> {
    check_argument(x)?;
    let start = miller_start(x, lmax);
    // index k + 1 holds j_k, so index 0 is j_{-1}
    let mut mant = vec![0.0; lmax + 2];
    let mut counts = vec![0i32; lmax + 2];
    let mut upper = 0.0;
    let mut cur = 1.0;
    let mut count = 0i32;
    for k in (0..=start).rev() {
        if k <= lmax {
            mant[k + 1] = cur;
            counts[k + 1] = count;
        }
        let lower = (2 * k + 1) as f64 / x * cur - upper;
        upper = cur;
        cur = lower;
        if lower.abs() > RESCALE_AT {
            upper /= RESCALE_AT;
            cur /= RESCALE_AT;
            count += 1;
        }
    }
    mant[0] = cur;
    counts[0] = count;

    // Least-squares fit of the unnormalized (j_{-1}, j_0) onto the exact pair; robust
    // when either member sits on a zero.
    let base = counts[0].max(counts[1]);
    let p = mant[0] * RESCALE_AT.powi(counts[0] - base);
    let q = mant[1] * RESCALE_AT.powi(counts[1] - base);
    let s_norm = p.abs().max(q.abs());
    let (p, q) = (p / s_norm, q / s_norm);
    let (s, c) = x.sin_cos();
    let mult = (c / x * p + s / x * q) / (p * p + q * q) / s_norm;

    Ok((0..=lmax)
        .map(|l| {
            ScaledPair::from_spherical(
                l as f64 + 0.5,
                x,
                (mant[l], counts[l]),
                (mant[l + 1], counts[l + 1]),
                mult,
                base,
            )
        })
        .collect())
}

/// `(N_ν(x), N'_ν(x))` for l = 0..=lmax.
pub fn n_ladder(x: f64, lmax: usize) -> Result<Vec<ScaledPair>> {
    check_argument(x)?;
    let (s, c) = x.sin_cos();
    let mut mant = Vec::with_capacity(lmax + 2);
    let mut counts = Vec::with_capacity(lmax + 2);
    let mut prev = s / x;
    let mut cur = -c / x;
    let mut count = 0i32;
    mant.push(prev);
    counts.push(0);
    mant.push(cur);
    counts.push(0);
    for k in 0..lmax {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
        if next.abs() > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            count += 1;
        }
        mant.push(cur);
        counts.push(count);
    }
    Ok((0..=lmax)
        .map(|l| {
            ScaledPair::from_spherical(
                l as f64 + 0.5,
                x,
                (mant[l], counts[l]),
                (mant[l + 1], counts[l + 1]),
                1.0,
                0,
            )
        })
        .collect())
}

fn j_pair(order: HalfIntOrder, x: f64) -> Result<ScaledPair> {
    let l = order.l() as usize;
    Ok(j_ladder(x, l)?[l])
}

fn n_pair(order: HalfIntOrder, x: f64) -> Result<ScaledPair> {
    let l = order.l() as usize;
    Ok(n_ladder(x, l)?[l])
}

/// Bessel function of the first kind J_ν(x), ν = l + ½.
pub fn bessel_j(order: HalfIntOrder, x: f64) -> Result<f64> {
    Ok(j_pair(order, x)?.value())
}

/// Neumann function N_ν(x), ν = l + ½.
pub fn bessel_n(order: HalfIntOrder, x: f64) -> Result<f64> {
    Ok(n_pair(order, x)?.value())
}

/// dJ_ν/dx.
pub fn bessel_j_prime(order: HalfIntOrder, x: f64) -> Result<f64> {
    Ok(j_pair(order, x)?.derivative())
}

/// dN_ν/dx.
pub fn bessel_n_prime(order: HalfIntOrder, x: f64) -> Result<f64> {
    Ok(n_pair(order, x)?.derivative())
}

/// The bilinear core of the cross-Wronskian ratio, evaluated on unnormalized pairs
/// `fa = (J_ν(aR), J'_ν(aR))` and `fb = (J_ν(bR), J'_ν(bR))` (any common scale).
pub(crate) fn cross_ratio_from_pairs(
    nu: f64,
    a: f64,
    b: f64,
    radius: f64,
    fa: (f64, f64),
    fb: (f64, f64),
) -> f64 {
    let (ja, dja) = fa;
    let (jb, djb) = fb;
    if (a - b).abs() < RESONANCE_GUARD * 0.5 * (a + b) {
        // Symmetric Lommel form: exact on the diagonal, O((a-b)^2) off it.
        let centrifugal = 1.0 - nu * nu / (a * b * radius * radius);
        0.5 * radius * (dja * djb + centrifugal * ja * jb)
    } else {
        (ja * b * djb - a * dja * jb) / ((a - b) * (a + b))
    }
}

/// `W[J_ν(ar), J_ν(br)]_R / (a² − b²)` with `W[f, g] = f ∂_r g − ∂_r f g` at r = R.
///
/// Equals `(1/R) ∫₀^R J_ν(ar) J_ν(br) r dr`, hence symmetric in `a ↔ b`. Near `a = b` the
/// Lommel diagonal value `(R/2)[J'_ν(aR)² + (1 − ν²/(aR)²) J_ν(aR)²]` is used instead.
pub fn cross_wronskian_ratio(order: HalfIntOrder, a: f64, b: f64, radius: f64) -> Result<f64> {
    for (what, value) in [("wavenumber a", a), ("wavenumber b", b), ("radius", radius)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::Domain { what, value });
        }
    }
    let pa = j_pair(order, a * radius)?;
    let pb = j_pair(order, b * radius)?;
    let core = cross_ratio_from_pairs(
        order.nu(),
        a,
        b,
        radius,
        (pa.value_dir, pa.slope_dir),
        (pb.value_dir, pb.slope_dir),
    );
    Ok(core * (pa.log_norm + pb.log_norm).exp())
}
