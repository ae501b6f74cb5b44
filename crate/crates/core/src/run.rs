//! Task dispatch for the command-line tool. Each task writes its CSV tables, the resolved
//! configuration and a `manifest.json` into the output directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analytic::{
    analytic_total_energy, analytic_total_number, dispersion_casimir_energy,
    dispersion_casimir_energy_quadrature, schwinger_casimir_energy,
};
use crate::config::{RunConfig, Task};
use crate::error::{Error, Result};
use crate::output::{write_csv, Cell, Table};
use crate::photonstats::{
    four_term_variance, marginal_variance, sample, theoretical_variance, thermal_marginal_variance,
    variance_nab,
};
use crate::spectrum::{analytic_spectrum, normalized_l1_distance, scan_with, Spectrum};
use crate::suppression::{apply_suppression, TimescaleModel};
use crate::units::{energy_to_ev, omega_to_si, spectral_density_to_si, BubbleConfig};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const RESOLVED_CONFIG_FILE: &str = "config.resolved.toml";
pub const SPECTRUM_COLUMNS: [&str; 2] = ["omega_rad_per_s", "dn_domega_seconds"];

/// Version tag of every CSV schema emitted by this build.
const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: usize,
}

/// What a run produced: files on disk, headline numbers and human-readable lines.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub task: Task,
    pub output_dir: PathBuf,
    pub outputs: Vec<OutputFile>,
    pub results: Map<String, Value>,
    pub lines: Vec<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    task: Task,
    outputs: Vec<OutputFile>,
    results: Map<String, Value>,
    lines: Vec<String>,
}

impl Writer<'_> {
    fn table(&mut self, name: &str, table: &Table) -> Result<()> {
        let file = format!("{name}.csv");
        write_csv(table, &self.dir.join(&file))?;
        self.outputs.push(OutputFile {
            file,
            schema: format!("{}/{name}/v{SCHEMA_VERSION}", self.task),
            columns: table.header.clone(),
            rows: table.rows.len(),
        });
        Ok(())
    }

    fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    fn line(&mut self, text: String) {
        self.lines.push(text);
    }
}

/// Validates the configuration, creates the output directory and runs the task.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let started = Instant::now();
    let dir = config.output.as_path();
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut w = Writer {
        dir,
        task: config.task,
        outputs: Vec::new(),
        results: Map::new(),
        lines: Vec::new(),
    };
    let bubble = config.bubble()?;
    match config.task {
        Task::Spectrum => task_spectrum(config, &bubble, &mut w)?,
        Task::Analytic => task_analytic(config, &bubble, &mut w)?,
        Task::Casimir => task_casimir(&bubble, &mut w)?,
        Task::Suppress => task_suppress(config, &bubble, &mut w)?,
        Task::Stats => task_stats(config, &mut w)?,
        Task::Compare => task_compare(config, &bubble, &mut w)?,
    }

    write_text(&dir.join(RESOLVED_CONFIG_FILE), &config.to_toml()?)?;
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "task": config.task,
        "config": config,
        "resolved_config_file": RESOLVED_CONFIG_FILE,
        "outputs": w.outputs,
        "results": w.results,
        "threads": rayon::current_num_threads(),
        "runtime_seconds": started.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
    write_text(&dir.join(MANIFEST_FILE), &text)?;

    Ok(RunReport {
        task: config.task,
        output_dir: dir.to_path_buf(),
        outputs: w.outputs,
        results: w.results,
        lines: w.lines,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn spectrum_table(s: &Spectrum) -> Table {
    let mut t = Table::new(&SPECTRUM_COLUMNS);
    for (&w, &d) in s.omega_grid.iter().zip(&s.dn_domega) {
        t.push(vec![
            omega_to_si(w).into(),
            spectral_density_to_si(d).into(),
        ]);
    }
    t
}

fn totals(w: &mut Writer<'_>, prefix: &str, s: &Spectrum) {
    let e_ev = energy_to_ev(s.total_e);
    w.result(&format!("{prefix}total_n"), s.total_n);
    w.result(&format!("{prefix}total_e_ev"), e_ev);
    if s.total_n > 0.0 {
        w.result(&format!("{prefix}mean_photon_energy_ev"), e_ev / s.total_n);
    }
}

fn task_spectrum(config: &RunConfig, bubble: &BubbleConfig, w: &mut Writer<'_>) -> Result<()> {
    let s = scan_with(bubble, &config.grid.spec(), &config.spectrum_options())?;
    w.table("spectrum", &spectrum_table(&s))?;
    totals(w, "", &s);
    w.result("quadrature", s.quadrature_report);
    w.result("omega_max_rad_per_s", omega_to_si(bubble.omega_out_max()));
    w.line(format!("N = {:.6e}", s.total_n));
    w.line(format!("E = {:.6e} eV", energy_to_ev(s.total_e)));
    Ok(())
}

fn task_analytic(config: &RunConfig, bubble: &BubbleConfig, w: &mut Writer<'_>) -> Result<()> {
    let s = analytic_spectrum(bubble, &config.grid.spec())?;
    w.table("analytic", &spectrum_table(&s))?;
    let n = analytic_total_number(bubble)?;
    let e = analytic_total_energy(bubble)?;
    w.result("total_n", n);
    w.result("total_e_ev", energy_to_ev(e));
    w.result("rk", bubble.rk());
    w.line(format!("N = {n:.6e}"));
    w.line(format!("E = {:.6e} eV", energy_to_ev(e)));
    Ok(())
}

fn task_casimir(bubble: &BubbleConfig, w: &mut Writer<'_>) -> Result<()> {
    let schwinger = schwinger_casimir_energy(bubble)?;
    let dispersion = dispersion_casimir_energy(bubble)?;
    let quadrature = dispersion_casimir_energy_quadrature(bubble)?;
    let radiated = analytic_total_energy(bubble)?;
    let ratio = if dispersion != 0.0 {
        radiated / dispersion
    } else {
        0.0
    };
    let mut t = Table::new(&["quantity", "value", "unit"]);
    for (name, value, unit) in [
        ("static_bulk_energy", energy_to_ev(schwinger), "eV"),
        ("static_dispersion_energy", energy_to_ev(dispersion), "eV"),
        (
            "static_dispersion_energy_quadrature",
            energy_to_ev(quadrature),
            "eV",
        ),
        ("radiated_energy_large_volume", energy_to_ev(radiated), "eV"),
        ("radiated_to_static_ratio", ratio, "1"),
    ] {
        t.push(vec![name.into(), value.into(), unit.into()]);
        w.result(name, value);
        w.line(format!("{name} = {value:.6e} {unit}"));
    }
    w.table("casimir", &t)
}

fn task_suppress(config: &RunConfig, bubble: &BubbleConfig, w: &mut Writer<'_>) -> Result<()> {
    let base = scan_with(bubble, &config.grid.spec(), &config.spectrum_options())?;
    let mut summary = Table::new(&["tau_fs", "total_n", "total_e_ev", "survival_ratio"]);
    let mut spectra = Table::new(&["tau_fs", SPECTRUM_COLUMNS[0], SPECTRUM_COLUMNS[1]]);
    let mut ratios = Vec::new();
    for &tau_fs in &config.suppress.tau_fs {
        let model = TimescaleModel::from_femtoseconds(tau_fs)?;
        let s = apply_suppression(&base, &model);
        let ratio = if base.total_n > 0.0 {
            s.total_n / base.total_n
        } else {
            0.0
        };
        summary.push(vec![
            tau_fs.into(),
            s.total_n.into(),
            energy_to_ev(s.total_e).into(),
            ratio.into(),
        ]);
        for row in spectrum_table(&s).rows {
            let mut cells = vec![Cell::Float(tau_fs)];
            cells.extend(row);
            spectra.push(cells);
        }
        ratios.push(json!({"tau_fs": tau_fs, "total_n": s.total_n, "survival_ratio": ratio}));
        w.line(format!(
            "tau = {tau_fs} fs: N = {:.6e}, N/N0 = {ratio:.6e}",
            s.total_n
        ));
    }
    w.table("suppress", &summary)?;
    w.table("suppressed_spectra", &spectra)?;
    w.result("scan", ratios);
    Ok(())
}

fn task_stats(config: &RunConfig, w: &mut Writer<'_>) -> Result<()> {
    let mut t = Table::new(&[
        "kind",
        "mean_occupation",
        "samples",
        "seed",
        "theoretical_variance",
        "empirical_variance",
        "standard_error",
        "z_score",
        "four_term_variance",
        "marginal_variance",
        "marginal_standard_error",
        "marginal_theoretical_variance",
    ]);
    let mut records = Vec::new();
    for kind in config.pair_kinds()? {
        for &mean in &config.stats.mean_occupation {
            let e = sample(kind, mean, config.stats.samples, config.seed)?;
            let theory = theoretical_variance(kind, mean, mean)?;
            let v = variance_nab(&e)?;
            let m = marginal_variance(&e)?;
            let z = v.z_score(theory);
            t.push(vec![
                kind.name().into(),
                mean.into(),
                e.len().into(),
                Cell::Text(config.seed.to_string()),
                theory.into(),
                v.value.into(),
                v.standard_error.into(),
                z.into(),
                four_term_variance(&e)?.into(),
                m.value.into(),
                m.standard_error.into(),
                thermal_marginal_variance(mean).into(),
            ]);
            records.push(json!({
                "kind": kind, "mean_occupation": mean,
                "theoretical_variance": theory, "empirical_variance": v.value,
                "standard_error": v.standard_error,
            }));
            w.line(format!(
                "{kind} <N> = {mean}: theory {theory:.6}, empirical {:.6} +/- {:.6}",
                v.value, v.standard_error
            ));
        }
    }
    w.table("stats", &t)?;
    w.result("ensembles", records);
    Ok(())
}

fn task_compare(config: &RunConfig, bubble: &BubbleConfig, w: &mut Writer<'_>) -> Result<()> {
    let grid = config.grid.spec();
    let opts = config.spectrum_options();
    let finite = scan_with(bubble, &grid, &opts)?;
    let limit = analytic_spectrum(bubble, &grid)?;
    let mut t = Table::new(&[
        "omega_rad_per_s",
        "finite_dn_domega_seconds",
        "analytic_dn_domega_seconds",
        "ratio",
    ]);
    for ((&om, &f), &a) in finite
        .omega_grid
        .iter()
        .zip(&finite.dn_domega)
        .zip(&limit.dn_domega)
    {
        let ratio = if a > 0.0 { f / a } else { f64::NAN };
        t.push(vec![
            omega_to_si(om).into(),
            spectral_density_to_si(f).into(),
            spectral_density_to_si(a).into(),
            ratio.into(),
        ]);
    }
    w.table("compare", &t)?;

    let mut summary = Table::new(&[
        "radius_um",
        "rk",
        "finite_total_n",
        "analytic_total_n",
        "number_ratio",
        "l1_distance",
    ]);
    let mut rows = Vec::new();
    let mut record = |b: &BubbleConfig, finite: &Spectrum, limit: &Spectrum| -> Result<()> {
        let d = normalized_l1_distance(finite, limit)?;
        let ratio = finite.total_n / limit.total_n;
        summary.push(vec![
            b.radius.into(),
            b.rk().into(),
            finite.total_n.into(),
            limit.total_n.into(),
            ratio.into(),
            d.into(),
        ]);
        rows.push((b.radius, b.rk(), ratio, d));
        Ok(())
    };
    record(bubble, &finite, &limit)?;
    for &factor in &config.compare.radius_factors {
        let mut scaled = bubble.clone();
        scaled.radius *= factor;
        let f = scan_with(&scaled, &grid, &opts)?;
        let a = analytic_spectrum(&scaled, &grid)?;
        record(&scaled, &f, &a)?;
    }
    w.table("compare_summary", &summary)?;
    for &(radius, rk, ratio, d) in &rows {
        w.line(format!(
            "R = {radius} um (RK = {rk:.1}): N_finite/N_analytic = {ratio:.4}, L1 distance = {d:.4}"
        ));
    }
    w.result(
        "comparisons",
        rows.iter()
            .map(|&(radius, rk, ratio, d)| {
                json!({"radius_um": radius, "rk": rk, "number_ratio": ratio, "l1_distance": d})
            })
            .collect::<Vec<_>>(),
    );
    Ok(())
}

/// Machine-readable error record for a failed run.
pub fn error_record(task: Option<Task>, err: &Error) -> Value {
    json!({
        "status": "error",
        "task": task,
        "kind": err.kind(),
        "message": err.to_string(),
    })
}
