use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use bubblerad::config::{parse_config, RunConfig, Task};
use bubblerad::run::{error_record, run};
use bubblerad::{Error, Result};

/// Vacuum photon production from a dielectric bubble.
///
/// Flags override the corresponding keys of the configuration file.
#[derive(Debug, Parser)]
#[command(name = "bubblerad", version)]
struct Cli {
    /// spectrum | analytic | casimir | suppress | stats | compare
    #[arg(long)]
    task: Option<String>,
    /// TOML configuration with dotted keys (scenario.radius_um = 4.5, ...)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the statistics sampler
    #[arg(long)]
    seed: Option<u64>,
    /// Relative quadrature tolerance (tolerances.rel_tol)
    #[arg(long)]
    tol: Option<f64>,
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(task) = &cli.task {
        config.task = task.parse::<Task>()?;
    }
    if let Some(out) = &cli.out {
        config.output = out.clone();
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(tol) = cli.tol {
        config.tolerances.rel_tol = tol;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut task = None;
    let outcome = resolve(&cli).and_then(|config| {
        task = Some(config.task);
        run(&config)
    });
    match outcome {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            println!(
                "wrote {} file(s) to {}",
                report.outputs.len() + 2,
                report.output_dir.display()
            );
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", error_record(task, &err));
            ExitCode::FAILURE
        }
    }
}
