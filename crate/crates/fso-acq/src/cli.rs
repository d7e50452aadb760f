//! Command-line front end: thin argument parsing over the experiment runner.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::experiment::{
    preset_task, reference_geometry, rerun_manifest, run_task, ExperimentConfig, LabeledConfig,
    RunArtifacts, SchemeSpec, TaskSpec, PRESET_NAMES,
};
use crate::montecarlo::McConfig;

#[derive(Parser)]
#[command(
    name = "fso-acq",
    version,
    about = "Acquisition-time analysis for photon-limited free-space optical links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset (fig1..fig8, fig10).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory for CSV results and the run manifest.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the Monte-Carlo / optimizer master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte-Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Detection operating points: thresholds, false-alarm and detection
    /// probabilities over a noise sweep.
    Detect {
        #[command(flatten)]
        common: CommonArgs,
        /// Mean signal photon count.
        #[arg(long, default_value_t = 25.0)]
        signal_count: f64,
        /// Lowest mean noise photon count.
        #[arg(long, default_value_t = 13.0)]
        noise_from: f64,
        /// Highest mean noise photon count.
        #[arg(long, default_value_t = 24.0)]
        noise_to: f64,
        /// False-alarm probability target.
        #[arg(long, default_value_t = 1e-12)]
        pfa_target: f64,
    },
    /// Adaptive spiral closed forms (config- or preset-driven).
    Spiral {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Shotgun closed forms (config- or preset-driven).
    Shotgun {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Optimize subregion radii (or run an optimization preset).
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte-Carlo simulation of the configured scheme.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Scheme comparison sweeps (presets fig5 / fig6) or a config table.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Export the scan spiral waypoints as CSV.
    Waypoints {
        #[command(flatten)]
        common: CommonArgs,
        /// Spiral outer radius; the region radius when omitted.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Re-run the task recorded in a manifest.
    Rerun {
        /// Path to a manifest.json from a previous run.
        manifest: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

/// Parse arguments and run; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(artifacts) => {
            for p in &artifacts.csv_paths {
                println!("wrote {}", p.display());
            }
            println!("wrote {}", artifacts.manifest_path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Json(_) => 2,
                _ => 3,
            }
        }
    }
}

fn dispatch(cli: Cli) -> crate::Result<RunArtifacts> {
    match cli.command {
        Command::Detect {
            common,
            signal_count,
            noise_from,
            noise_to,
            pfa_target,
        } => {
            let noise_counts: Vec<f64> = {
                let mut v = Vec::new();
                let mut mu = noise_from;
                while mu <= noise_to + 1e-9 {
                    v.push(mu);
                    mu += 1.0;
                }
                v
            };
            let task = TaskSpec::DetectionTable {
                signal_count,
                noise_counts,
                pfa_target,
            };
            run_task(&task, None, &common.out)
        }
        Command::Spiral { common } => run_table(common, Kind::Spiral),
        Command::Shotgun { common } => run_table(common, Kind::Shotgun),
        Command::Optimize { common } => run_table(common, Kind::Optimize),
        Command::Simulate { common } => run_table(common, Kind::Simulate),
        Command::Compare { common } => run_table(common, Kind::Compare),
        Command::Waypoints { common, radius } => {
            let geometry = match &common.config {
                Some(path) => ExperimentConfig::load(path)?.geometry,
                None => reference_geometry(),
            };
            let task = TaskSpec::Waypoints {
                geometry,
                out_radius: radius.unwrap_or(geometry.region_radius),
            };
            run_task(&task, None, &common.out)
        }
        Command::Rerun { manifest, out } => rerun_manifest(&manifest, &out),
    }
}

enum Kind {
    Spiral,
    Shotgun,
    Optimize,
    Simulate,
    Compare,
}

impl Kind {
    /// Presets this subcommand accepts.
    fn presets(&self) -> &'static [&'static str] {
        match self {
            Kind::Spiral => &["fig1", "fig2"],
            Kind::Shotgun => &["fig8", "fig10"],
            Kind::Optimize => &["fig3", "fig4", "fig7"],
            Kind::Compare => &["fig5", "fig6"],
            Kind::Simulate => &[],
        }
    }
}

fn run_table(common: CommonArgs, kind: Kind) -> crate::Result<RunArtifacts> {
    let (mut task, preset_name) = match (&common.preset, &common.config) {
        (Some(name), None) => {
            if !PRESET_NAMES.contains(&name.as_str()) {
                return Err(Error::config(format!(
                    "unknown preset '{name}' (known: {})",
                    PRESET_NAMES.join(", ")
                )));
            }
            if !kind.presets().contains(&name.as_str()) {
                return Err(Error::config(format!(
                    "preset '{name}' belongs to another subcommand (this one accepts: {})",
                    kind.presets().join(", ")
                )));
            }
            (preset_task(name)?, Some(name.clone()))
        }
        (None, Some(path)) => {
            let config = ExperimentConfig::load(path)?;
            check_kind(&kind, &config)?;
            (
                TaskSpec::Table {
                    runs: vec![LabeledConfig {
                        label: "run".into(),
                        config,
                    }],
                },
                None,
            )
        }
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "--preset and --config are mutually exclusive",
            ))
        }
        (None, None) => {
            return Err(Error::config(
                "this subcommand needs either --preset or --config",
            ))
        }
    };
    apply_overrides(&mut task, &common);
    run_task(&task, preset_name.as_deref(), &common.out)
}

fn check_kind(kind: &Kind, config: &ExperimentConfig) -> crate::Result<()> {
    let spiral = matches!(config.scheme, SchemeSpec::AdaptiveSpiral { .. });
    match kind {
        Kind::Spiral | Kind::Optimize if !spiral => Err(Error::config(
            "this subcommand needs an adaptive_spiral scheme",
        )),
        Kind::Shotgun if spiral => Err(Error::config("this subcommand needs a shotgun scheme")),
        Kind::Simulate if config.mc.is_none() => {
            Err(Error::config("simulate needs an mc section in the config"))
        }
        _ => Ok(()),
    }
}

fn apply_overrides(task: &mut TaskSpec, common: &CommonArgs) {
    let (TaskSpec::Table { runs } | TaskSpec::RadiiLayout { runs }) = task else {
        return;
    };
    for run in runs {
        if let Some(seed) = common.seed {
            run.config.ga.seed = seed;
            if let Some(mc) = &mut run.config.mc {
                mc.seed = seed;
            }
        }
        if let Some(trials) = common.trials {
            let mc = run.config.mc.get_or_insert_with(|| McConfig {
                trials,
                ..McConfig::default()
            });
            mc.trials = trials;
        }
    }
}
