//! Acceptance suite. Runs every criterion at its stated tolerance and runtime budget and
//! prints one `[PASS]`/`[FAIL]` line each; exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bubblerad::analytic::{
    analytic_dn_domega, analytic_total_energy, analytic_total_number, dispersion_casimir_energy,
    dispersion_casimir_energy_quadrature, schwinger_casimir_energy,
};
use bubblerad::modes::{matching_residuals, solve_matching};
use bubblerad::photonstats::{
    marginal_variance, sample, theoretical_variance, thermal_marginal_variance, variance_nab,
    PairKind,
};
use bubblerad::quad::{integrate, QuadOptions};
use bubblerad::specfun::{
    bessel_j, bessel_j_prime, bessel_n, bessel_n_prime, cross_wronskian_ratio, HalfIntOrder,
    RESONANCE_GUARD,
};
use bubblerad::spectrum::{analytic_spectrum, normalized_l1_distance, scan, GridSpec, Spectrum};
use bubblerad::suppression::{apply_suppression, suppression_factor, TimescaleModel};
use bubblerad::units::{omega_to_internal, omega_to_si, BubbleConfig};

/// Closed-form photon number at n = 1.33, R = 45 µm, K = 2π/0.4 µm⁻¹, evaluated with
/// 40-digit arithmetic.
const SCHWINGER_N_ORACLE: f64 = 867_299.320_615_771_3;

fn cutoff() -> f64 {
    2.0 * PI / 0.4
}

fn reference_config() -> BubbleConfig {
    BubbleConfig::new(1.33, 4.5, cutoff()).unwrap()
}

fn reference_spectrum() -> &'static Spectrum {
    static CELL: OnceLock<Spectrum> = OnceLock::new();
    CELL.get_or_init(|| scan(&reference_config(), &GridSpec::default()).unwrap())
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_schwinger_count() -> Outcome {
    let c = BubbleConfig::new(1.33, 45.0, cutoff()).unwrap();
    let n = analytic_total_number(&c).unwrap();
    let rel = (n - SCHWINGER_N_ORACLE).abs() / SCHWINGER_N_ORACLE;
    outcome(
        (1e5..=1e7).contains(&n) && rel <= 1e-12,
        format!("N = {n:.6e} in [1e5, 1e7]; |N - oracle|/oracle = {rel:.1e} (<= 1e-12)"),
    )
}

fn c2_static_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_identity: f64 = 0.0;
    let mut worst_quadrature: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1.01..=2.0);
        let rk: f64 = rng.random_range(1.0..=1e3);
        let k = rng.random_range(0.5..=20.0);
        let c = BubbleConfig::new(n, rk / k, k).unwrap();
        let schwinger = schwinger_casimir_energy(&c).unwrap();
        let dispersion = dispersion_casimir_energy(&c).unwrap();
        let quadrature = dispersion_casimir_energy_quadrature(&c).unwrap();
        worst_identity = worst_identity.max((schwinger - dispersion).abs() / dispersion.abs());
        worst_quadrature = worst_quadrature.max((quadrature - dispersion).abs() / dispersion.abs());
    }
    outcome(
        worst_identity <= 1e-12 && worst_quadrature <= 1e-8,
        format!(
            "100 random (n, RK): max identity deviation {worst_identity:.1e} (<= 1e-12), \
             quadrature vs closed form {worst_quadrature:.1e} (<= 1e-8)"
        ),
    )
}

fn c3_analytic_consistency() -> Outcome {
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_intervals: 1000,
    };
    let mut worst: f64 = 0.0;
    for c in [
        reference_config(),
        BubbleConfig::new(1.33, 45.0, cutoff()).unwrap(),
    ] {
        let top = c.omega_out_max();
        let n = integrate(|w| Ok(analytic_dn_domega(&c, w)), 0.0, top, &[], &opts)
            .unwrap()
            .value;
        let e = integrate(|w| Ok(w * analytic_dn_domega(&c, w)), 0.0, top, &[], &opts)
            .unwrap()
            .value;
        let n_closed = analytic_total_number(&c).unwrap();
        let e_closed = analytic_total_energy(&c).unwrap();
        worst = worst
            .max((n - n_closed).abs() / n_closed)
            .max((e - e_closed).abs() / e_closed);
    }
    outcome(
        worst <= 1e-10,
        format!("max relative deviation {worst:.1e} (<= 1e-10)"),
    )
}

fn c4_order_contrast() -> Outcome {
    let points: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&eps| {
            let c = BubbleConfig::new(1.0 + eps, 45.0, cutoff()).unwrap();
            let ratio = analytic_total_energy(&c).unwrap() / dispersion_casimir_energy(&c).unwrap();
            (eps.ln(), ratio.ln())
        })
        .collect();
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    outcome(
        (slope - 1.0).abs() <= 0.2,
        format!("log-log slope of E_rad/E_static vs (n-1) = {slope:.4} (ideal 1, within 20%)"),
    )
}

fn loglog_slope(s: &Spectrum, lo: f64, hi: f64) -> f64 {
    let pts: Vec<(f64, f64)> = s
        .omega_grid
        .iter()
        .zip(&s.dn_domega)
        .filter(|(w, _)| **w >= lo && **w <= hi)
        .map(|(w, v)| (w.ln(), v.ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
}

fn c5_reference_spectrum_shape() -> Outcome {
    let c = reference_config();
    let grid = GridSpec::default();
    let s = reference_spectrum();
    let top = c.omega_out_max();
    let cutoff_hz = omega_to_si(c.cutoff) / (2.0 * PI);

    let non_negative = s.dn_domega.iter().all(|&v| v >= 0.0);
    let rising = s
        .omega_grid
        .windows(2)
        .zip(s.dn_domega.windows(2))
        .filter(|(w, _)| w[1] <= 0.8 * top)
        .all(|(_, v)| v[1] > v[0]);
    let slope = loglog_slope(s, 0.08 * top, 0.8 * top);

    let d_small = normalized_l1_distance(s, &analytic_spectrum(&c, &grid).unwrap()).unwrap();
    let big = BubbleConfig::new(1.33, 45.0, cutoff()).unwrap();
    let s_big = scan(&big, &grid).unwrap();
    let d_big = normalized_l1_distance(&s_big, &analytic_spectrum(&big, &grid).unwrap()).unwrap();

    outcome(
        non_negative && rising && (1.5..=2.5).contains(&slope) && d_small > d_big,
        format!(
            "cK/2pi = {cutoff_hz:.2e} Hz, RK = {:.1}: non-negative {non_negative}, rising below 0.8 w_max {rising}, \
             exponent over [0.08, 0.8] w_max = {slope:.3} (in [1.5, 2.5]), \
             L1 to analytic {d_small:.4} > {d_big:.4} at RK = {:.1}",
            c.rk(),
            big.rk()
        ),
    )
}

fn c6_special_functions() -> Outcome {
    let mut worst_wronskian: f64 = 0.0;
    for l in 0..=40 {
        let o = HalfIntOrder::new(l);
        for i in 0..=200 {
            let x = 0.1 * (5000f64).powf(i as f64 / 200.0);
            let w = bessel_j(o, x).unwrap() * bessel_n_prime(o, x).unwrap()
                - bessel_j_prime(o, x).unwrap() * bessel_n(o, x).unwrap();
            let exact = 2.0 / (PI * x);
            worst_wronskian = worst_wronskian.max((w - exact).abs() / exact);
        }
    }

    let mut worst_branch: f64 = 0.0;
    for (l, a, radius) in [
        (0, 1.0, 1.0),
        (3, 7.3, 2.0),
        (12, 20.0, 1.5),
        (40, 0.9, 10.0),
    ] {
        let o = HalfIntOrder::new(l);
        let inside =
            cross_wronskian_ratio(o, a, a * (1.0 + 0.999 * RESONANCE_GUARD), radius).unwrap();
        let outside =
            cross_wronskian_ratio(o, a, a * (1.0 + 1.001 * RESONANCE_GUARD), radius).unwrap();
        worst_branch = worst_branch.max((inside - outside).abs() / inside.abs());
    }

    let cfg = BubbleConfig::new(1.33, 1.0, 1000.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_residual: f64 = 0.0;
    for _ in 0..2000 {
        let l = rng.random_range(0..=30);
        let u: f64 = rng.random_range(0.1..=200.0);
        let m = solve_matching(&cfg, HalfIntOrder::new(l), u / cfg.radius).unwrap();
        let (r0, r1) = matching_residuals(&cfg, &m).unwrap();
        worst_residual = worst_residual.max(r0).max(r1);
    }

    outcome(
        worst_wronskian <= 1e-9 && worst_branch <= 1e-6 && worst_residual < 1e-9,
        format!(
            "Wronskian {worst_wronskian:.1e} (<= 1e-9), branch continuity {worst_branch:.1e} (<= 1e-6), \
             matching residual {worst_residual:.1e} (< 1e-9)"
        ),
    )
}

fn c7_suppression() -> Outcome {
    let w = omega_to_internal(1e15).unwrap();
    let tau = TimescaleModel::from_femtoseconds(10.0).unwrap().tau;
    let f = suppression_factor(w, tau);
    let rel = (f - (-10.0f64).exp()).abs() / (-10.0f64).exp();
    let s = reference_spectrum();
    let totals: Vec<f64> = [0.0, 1.0, 10.0, 100.0]
        .iter()
        .map(|&t| apply_suppression(s, &TimescaleModel::from_femtoseconds(t).unwrap()).total_n)
        .collect();
    let decreasing = totals.windows(2).all(|p| p[1] < p[0]);
    outcome(
        rel <= 1e-12 && decreasing,
        format!(
            "factor(1e15 rad/s, 10 fs) = {f:.12e}, deviation from e^-10 {rel:.1e} (<= 1e-12); \
             N at 0/1/10/100 fs = {:.3e}/{:.3e}/{:.3e}/{:.3e} decreasing {decreasing}",
            totals[0], totals[1], totals[2], totals[3]
        ),
    )
}

fn c8_photon_statistics() -> Outcome {
    let exact = theoretical_variance(PairKind::ThermalIndependent, 1.0, 1.0).unwrap();
    let mut worst_z: f64 = 0.0;
    let mut worst_marginal_z: f64 = 0.0;
    let mut squeezed_zero = true;
    for (i, mean) in [0.5, 1.0, 5.0].into_iter().enumerate() {
        let seed = 800 + i as u64;
        let thermal = sample(PairKind::ThermalIndependent, mean, 100_000, seed).unwrap();
        let v = variance_nab(&thermal).unwrap();
        worst_z = worst_z.max(v.z_score(theoretical_variance(thermal.kind, mean, mean).unwrap()));

        let squeezed = sample(PairKind::TwoModeSqueezed, mean, 100_000, seed).unwrap();
        squeezed_zero &= variance_nab(&squeezed).unwrap().value == 0.0;
        for e in [&thermal, &squeezed] {
            let m = marginal_variance(e).unwrap();
            worst_marginal_z = worst_marginal_z.max(m.z_score(thermal_marginal_variance(mean)));
        }
    }
    outcome(
        exact == 4.0 && worst_z < 5.0 && squeezed_zero && worst_marginal_z < 5.0,
        format!(
            "thermal(1,1) = {exact}; MC variance max |z| = {worst_z:.2} (< 5); squeezed variance exactly 0: \
             {squeezed_zero}; marginal max |z| = {worst_marginal_z:.2} (< 5)"
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (
            1,
            "Schwinger-scale photon count",
            Duration::from_secs(1),
            c1_schwinger_count,
        ),
        (
            2,
            "static-energy identity",
            Duration::from_secs(10),
            c2_static_identity,
        ),
        (
            3,
            "analytic self-consistency",
            Duration::from_secs(1),
            c3_analytic_consistency,
        ),
        (
            4,
            "order-in-(n-1) contrast",
            Duration::from_secs(1),
            c4_order_contrast,
        ),
        (
            5,
            "reference spectrum shape",
            Duration::from_secs(30 * 60),
            c5_reference_spectrum_shape,
        ),
        (
            6,
            "special-function suite",
            Duration::from_secs(60),
            c6_special_functions,
        ),
        (
            7,
            "suppression figures",
            Duration::from_secs(5 * 60),
            c7_suppression,
        ),
        (
            8,
            "photon statistics",
            Duration::from_secs(60),
            c8_photon_statistics,
        ),
    ];
    let mut failures = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= budget, o.detail),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] criterion {id}: {name}: {detail} [{:.2?} of {:.0?} budget]",
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            budget
        );
    }
    println!("acceptance: {} passed, {failures} failed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
