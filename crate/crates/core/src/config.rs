//! Run configuration: a TOML document with dotted keys, every field optional.
//!
//! ```toml
//! task = "spectrum"
//! seed = 7
//! scenario.n_outside = 1.33
//! scenario.radius_um = 4.5
//! grid.points = 256
//! suppress.tau_fs = [0, 1, 10, 100]
//! ```
//!
//! Omitted keys take the defaults of [`RunConfig::default`]; an empty document is the
//! R = 4.5 µm reference scenario.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{invalid, Error, Result};
use crate::photonstats::PairKind;
use crate::spectrum::{GridScale, GridSpec, InDomain, SpectrumOptions, MIN_GRID_POINTS};
use crate::units::BubbleConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    #[default]
    Spectrum,
    Analytic,
    Casimir,
    Suppress,
    Stats,
    Compare,
}

impl Task {
    pub const ALL: [Task; 6] = [
        Task::Spectrum,
        Task::Analytic,
        Task::Casimir,
        Task::Suppress,
        Task::Stats,
        Task::Compare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::Analytic => "analytic",
            Task::Casimir => "casimir",
            Task::Suppress => "suppress",
            Task::Stats => "stats",
            Task::Compare => "compare",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| invalid("task", format!("unknown task '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub n_inside: f64,
    pub n_outside: f64,
    pub radius_um: f64,
    pub cutoff_per_um: f64,
    pub label: String,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        ScenarioSection {
            n_inside: 1.0,
            n_outside: 1.33,
            radius_um: 4.5,
            cutoff_per_um: 2.0 * PI / 0.4,
            label: "reference".to_string(),
        }
    }
}

impl ScenarioSection {
    pub fn bubble(&self) -> Result<BubbleConfig> {
        let config = BubbleConfig {
            n_inside: self.n_inside,
            n_outside: self.n_outside,
            radius: self.radius_um,
            cutoff: self.cutoff_per_um,
            label: self.label.clone(),
        };
        config.validate().map_err(|e| match e {
            Error::InvalidConfig { field, reason } => {
                let key = match field.as_str() {
                    "radius" => "scenario.radius_um",
                    "cutoff" => "scenario.cutoff_per_um",
                    "n_inside" => "scenario.n_inside",
                    "n_outside" => "scenario.n_outside",
                    _ => "scenario",
                };
                invalid(key, reason)
            }
            other => other,
        })?;
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub points: usize,
    pub scale: GridScale,
    pub min_fraction: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = GridSpec::default();
        GridSection {
            points: g.points,
            scale: g.scale,
            min_fraction: g.min_fraction,
        }
    }
}

impl GridSection {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            points: self.points,
            scale: self.scale,
            min_fraction: self.min_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSection {
    /// Relative tolerance of the ω_in quadrature.
    pub rel_tol: f64,
    /// Truncation tolerance of the angular-momentum sum.
    pub kernel_rel_tol: f64,
}

impl Default for ToleranceSection {
    fn default() -> Self {
        let o = SpectrumOptions::default();
        ToleranceSection {
            rel_tol: o.quad_tol,
            kernel_rel_tol: o.kernel_rel_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub omega_in_max: InDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuppressSection {
    /// Change timescales in fs; a scalar is read as a one-element list.
    #[serde(deserialize_with = "scalar_or_list")]
    pub tau_fs: Vec<f64>,
}

impl Default for SuppressSection {
    fn default() -> Self {
        SuppressSection {
            tau_fs: vec![0.0, 1.0, 10.0, 100.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsSection {
    pub samples: usize,
    #[serde(deserialize_with = "scalar_or_list")]
    pub mean_occupation: Vec<f64>,
    pub kinds: Vec<String>,
}

impl Default for StatsSection {
    fn default() -> Self {
        StatsSection {
            samples: 100_000,
            mean_occupation: vec![0.5, 1.0, 5.0],
            kinds: PairKind::ALL.iter().map(|k| k.name().to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSection {
    /// Extra scans at `factor × R` (same K) whose shape distance to their own
    /// large-volume curve is reported next to the base scenario's.
    pub radius_factors: Vec<f64>,
}

fn scalar_or_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub task: Task,
    pub seed: u64,
    pub output: PathBuf,
    pub scenario: ScenarioSection,
    pub grid: GridSection,
    pub tolerances: ToleranceSection,
    pub spectrum: SpectrumSection,
    pub suppress: SuppressSection,
    pub stats: StatsSection,
    pub compare: CompareSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            task: Task::default(),
            seed: 0,
            output: PathBuf::from("out"),
            scenario: ScenarioSection::default(),
            grid: GridSection::default(),
            tolerances: ToleranceSection::default(),
            spectrum: SpectrumSection::default(),
            suppress: SuppressSection::default(),
            stats: StatsSection::default(),
            compare: CompareSection::default(),
        }
    }
}

fn in_open_unit(field: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(invalid(field, format!("must lie in (0, 1), got {v}")));
    }
    Ok(())
}

impl RunConfig {
    /// Checks every field; called before any computation.
    pub fn validate(&self) -> Result<()> {
        self.scenario.bubble()?;
        if self.grid.points < MIN_GRID_POINTS {
            return Err(invalid(
                "grid.points",
                format!("need at least {MIN_GRID_POINTS}, got {}", self.grid.points),
            ));
        }
        in_open_unit("grid.min_fraction", self.grid.min_fraction)?;
        in_open_unit("tolerances.rel_tol", self.tolerances.rel_tol)?;
        in_open_unit("tolerances.kernel_rel_tol", self.tolerances.kernel_rel_tol)?;
        if let Some(t) = self
            .suppress
            .tau_fs
            .iter()
            .find(|t| !(**t >= 0.0 && t.is_finite()))
        {
            return Err(invalid(
                "suppress.tau_fs",
                format!("timescales must be finite and >= 0, got {t}"),
            ));
        }
        if self.stats.samples < 2 {
            return Err(invalid(
                "stats.samples",
                format!("need at least 2, got {}", self.stats.samples),
            ));
        }
        if let Some(m) = self
            .stats
            .mean_occupation
            .iter()
            .find(|m| !(**m >= 0.0 && m.is_finite()))
        {
            return Err(invalid(
                "stats.mean_occupation",
                format!("must be finite and >= 0, got {m}"),
            ));
        }
        self.pair_kinds()?;
        if let Some(f) = self
            .compare
            .radius_factors
            .iter()
            .find(|f| !(**f > 0.0 && f.is_finite()))
        {
            return Err(invalid(
                "compare.radius_factors",
                format!("must be finite and > 0, got {f}"),
            ));
        }
        Ok(())
    }

    pub fn bubble(&self) -> Result<BubbleConfig> {
        self.scenario.bubble()
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            quad_tol: self.tolerances.rel_tol,
            kernel_rel_tol: self.tolerances.kernel_rel_tol,
            in_domain: self.spectrum.omega_in_max,
        }
    }

    pub fn pair_kinds(&self) -> Result<Vec<PairKind>> {
        self.stats.kinds.iter().map(|k| k.parse()).collect()
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        match e.span() {
            Some(span) => {
                let (line, column) = line_column(text, span.start);
                Error::Parse(format!("line {line}, column {column}: {message}"))
            }
            None => Error::Parse(message),
        }
    })?;
    config.validate()?;
    Ok(config)
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_reference_scenario() {
        let c = parse_config("").unwrap();
        assert_eq!(c, RunConfig::default());
        let b = c.bubble().unwrap();
        assert_eq!((b.n_outside, b.radius), (1.33, 4.5));
        assert!((b.cutoff - 2.0 * PI / 0.4).abs() < 1e-15);
        assert_eq!(c.grid.points, 256);
        assert_eq!(c.grid.scale, GridScale::Log);
        assert_eq!(c.tolerances.rel_tol, 1e-4);
    }

    #[test]
    fn dotted_and_table_forms_agree() {
        let dotted = "task = \"analytic\"\nscenario.radius_um = 45.0\ngrid.scale = \"linear\"\nsuppress.tau_fs = 3\n";
        let table = "task = \"analytic\"\n[scenario]\nradius_um = 45.0\n[grid]\nscale = \"linear\"\n[suppress]\ntau_fs = [3.0]\n";
        let a = parse_config(dotted).unwrap();
        assert_eq!(a, parse_config(table).unwrap());
        assert_eq!(a.task, Task::Analytic);
        assert_eq!(a.suppress.tau_fs, vec![3.0]);
    }

    #[test]
    fn negative_radius_names_field() {
        let err = parse_config("scenario.radius_um = -1.0").unwrap_err();
        assert_eq!(err.kind(), "invalid_config");
        assert!(err.to_string().contains("radius"), "{err}");
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_config("seed = 1\n\ngrid.points = = 3\n").unwrap_err();
        assert_eq!(err.kind(), "parse");
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("scenario.radius = 3.0").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(parse_config("colour = 1").is_err());
    }

    #[test]
    fn field_validation() {
        for (doc, field) in [
            ("grid.points = 8", "grid.points"),
            ("tolerances.rel_tol = 0.0", "tolerances.rel_tol"),
            ("suppress.tau_fs = [-1.0]", "suppress.tau_fs"),
            ("stats.samples = 1", "stats.samples"),
            ("stats.kinds = [\"coherent\"]", "coherent"),
            ("scenario.n_outside = 0.5", "n_outside"),
            ("scenario.cutoff_per_um = 0.0", "cutoff"),
        ] {
            let err = parse_config(doc).unwrap_err();
            assert!(err.to_string().contains(field), "{doc}: {err}");
        }
    }

    #[test]
    fn task_names() {
        for t in Task::ALL {
            assert_eq!(t.name().parse::<Task>().unwrap(), t);
            let doc = format!("task = \"{}\"", t.name());
            assert_eq!(parse_config(&doc).unwrap().task, t);
        }
        assert!("plot".parse::<Task>().is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let c = parse_config("task = \"stats\"\nseed = 42\nstats.mean_occupation = 2.5\n").unwrap();
        assert_eq!(parse_config(&c.to_toml().unwrap()).unwrap(), c);
    }
}
