//! Task execution: resolve a task into CSV rows, write the results and a
//! JSON manifest that can reproduce them byte for byte.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{
    ExperimentConfig, ObjectiveSpec, RadiiSpec, SchemeSpec, Sigma0Keyword, Sigma0Spec, SweepSpec,
    SweepVar,
};
use crate::adaptive_spiral::{event_probs, SpiralTimeStats};
use crate::detection::{poisson_tail, threshold_for_pfa};
use crate::error::{Error, Result};
use crate::ga::{self, Objective};
use crate::montecarlo::{self, McConfig, McSummary};
use crate::region::{spiral_waypoints, LocationModel, Partition, ScanGeometry};
use crate::shotgun::{self, FiringDistribution};

/// A fully resolved, reproducible unit of work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskSpec {
    /// One or more labeled experiment configs merged into one results table.
    Table { runs: Vec<LabeledConfig> },
    /// Subregion layouts of two spiral configs side by side (radius per row).
    RadiiLayout { runs: Vec<LabeledConfig> },
    /// Spiral waypoint export.
    Waypoints {
        geometry: ScanGeometry,
        out_radius: f64,
    },
    /// Detection operating points over a noise sweep.
    DetectionTable {
        signal_count: f64,
        noise_counts: Vec<f64>,
        pfa_target: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledConfig {
    pub label: String,
    pub config: ExperimentConfig,
}

/// Run manifest: everything needed to reproduce the CSV outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub package: String,
    pub package_version: String,
    /// Preset name when the task came from one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub task: TaskSpec,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
}

/// Paths produced by a run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub csv_paths: Vec<PathBuf>,
    pub manifest_path: PathBuf,
}

/// Format a float with nine significant digits, the stable CSV convention.
fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

/// One row of the generic results table.
#[derive(Debug, Clone, Default)]
struct Row {
    variant: String,
    n: Option<usize>,
    pd: f64,
    sigma0: Option<f64>,
    tau: Option<f64>,
    mean_s: Option<f64>,
    ccdf: Option<f64>,
    mc_mean_s: Option<f64>,
    mc_mean_stderr_s: Option<f64>,
    mc_ccdf: Option<f64>,
    mc_ccdf_stderr: Option<f64>,
}

const TABLE_HEADER: &str = "variant,n,pd,sigma0_m,tau_s,mean_s,ccdf,\
                            mc_mean_s,mc_mean_stderr_s,mc_ccdf,mc_ccdf_stderr";

impl Row {
    fn write(&self, out: &mut impl Write) -> Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.variant,
            self.n.map(|v| v.to_string()).unwrap_or_default(),
            fmt(self.pd),
            opt(self.sigma0),
            opt(self.tau),
            opt(self.mean_s),
            opt(self.ccdf),
            opt(self.mc_mean_s),
            opt(self.mc_mean_stderr_s),
            opt(self.mc_ccdf),
            opt(self.mc_ccdf_stderr),
        )?;
        Ok(())
    }
}

/// Execute a task, writing `results.csv` (plus any side outputs) and
/// `manifest.json` into `out_dir`. Partial outputs are removed on failure.
pub fn run_task(task: &TaskSpec, preset: Option<&str>, out_dir: &Path) -> Result<RunArtifacts> {
    let started = std::time::Instant::now();
    fs::create_dir_all(out_dir)?;
    let mut created: Vec<PathBuf> = Vec::new();
    let result = run_task_inner(task, out_dir, &mut created);
    match result {
        Ok(csv_paths) => {
            let manifest_path = out_dir.join("manifest.json");
            let manifest = Manifest {
                schema_version: super::config::SCHEMA_VERSION,
                package: env!("CARGO_PKG_NAME").to_string(),
                package_version: env!("CARGO_PKG_VERSION").to_string(),
                preset: preset.map(str::to_string),
                task: task.clone(),
                outputs: csv_paths
                    .iter()
                    .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
                    .collect(),
                wall_time_s: started.elapsed().as_secs_f64(),
            };
            let mut file = fs::File::create(&manifest_path)?;
            serde_json::to_writer_pretty(&mut file, &manifest)?;
            file.write_all(b"\n")?;
            Ok(RunArtifacts {
                csv_paths,
                manifest_path,
            })
        }
        Err(e) => {
            for path in created {
                let _ = fs::remove_file(path);
            }
            Err(e)
        }
    }
}

/// Re-run the task recorded in a manifest, writing into `out_dir`.
pub fn rerun_manifest(manifest_path: &Path, out_dir: &Path) -> Result<RunArtifacts> {
    let text = fs::read_to_string(manifest_path)
        .map_err(|e| Error::config(format!("cannot read manifest: {e}")))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| Error::config(format!("bad manifest: {e}")))?;
    run_task(&manifest.task, manifest.preset.as_deref(), out_dir)
}

fn run_task_inner(
    task: &TaskSpec,
    out_dir: &Path,
    created: &mut Vec<PathBuf>,
) -> Result<Vec<PathBuf>> {
    match task {
        TaskSpec::Table { runs } => {
            let mut rows = Vec::new();
            let mut side_outputs = Vec::new();
            for run in runs {
                run.config.validate()?;
                rows.extend(table_rows(
                    &run.label,
                    &run.config,
                    out_dir,
                    &mut side_outputs,
                )?);
            }
            created.extend(side_outputs.iter().cloned());
            // a single-config run may rename its results file
            let csv_name = match &runs[..] {
                [only] => only
                    .config
                    .outputs
                    .as_ref()
                    .and_then(|o| o.results_csv.clone())
                    .unwrap_or_else(|| "results.csv".to_string()),
                _ => "results.csv".to_string(),
            };
            let path = out_dir.join(csv_name);
            created.push(path.clone());
            let mut out = std::io::BufWriter::new(fs::File::create(&path)?);
            writeln!(out, "{TABLE_HEADER}")?;
            for row in &rows {
                row.write(&mut out)?;
            }
            out.flush()?;
            let mut paths = vec![path];
            paths.extend(side_outputs);
            Ok(paths)
        }
        TaskSpec::RadiiLayout { runs } => {
            let path = out_dir.join("results.csv");
            created.push(path.clone());
            let mut out = std::io::BufWriter::new(fs::File::create(&path)?);
            writeln!(out, "variant,k,radius_m,mean_s")?;
            for run in runs {
                run.config.validate()?;
                let (partition, mean) = resolved_spiral_layout(&run.config)?;
                for (k, &r) in partition.radii().iter().enumerate() {
                    writeln!(out, "{},{},{},{}", run.label, k + 1, fmt(r), fmt(mean))?;
                }
            }
            out.flush()?;
            Ok(vec![path])
        }
        TaskSpec::Waypoints {
            geometry,
            out_radius,
        } => {
            let path = out_dir.join("waypoints.csv");
            created.push(path.clone());
            let wps = spiral_waypoints(geometry, *out_radius)?;
            let mut out = std::io::BufWriter::new(fs::File::create(&path)?);
            writeln!(out, "index,r_s_m,theta_s_rad,x_m,y_m")?;
            for (i, w) in wps.iter().enumerate() {
                let (x, y) = w.xy();
                writeln!(
                    out,
                    "{i},{},{},{},{}",
                    fmt(w.radius),
                    fmt(w.angle),
                    fmt(x),
                    fmt(y)
                )?;
            }
            out.flush()?;
            Ok(vec![path])
        }
        TaskSpec::DetectionTable {
            signal_count,
            noise_counts,
            pfa_target,
        } => {
            let path = out_dir.join("detection.csv");
            created.push(path.clone());
            let mut out = std::io::BufWriter::new(fs::File::create(&path)?);
            writeln!(out, "mu0,gamma0,p_fa,p_d")?;
            for &mu0 in noise_counts {
                let det = threshold_for_pfa(mu0, *pfa_target)?;
                let pfa = poisson_tail(det.count_threshold, mu0)?;
                let pd = poisson_tail(det.count_threshold, mu0 + signal_count)?;
                writeln!(
                    out,
                    "{},{},{},{}",
                    fmt(mu0),
                    det.count_threshold,
                    fmt(pfa),
                    fmt(pd)
                )?;
            }
            out.flush()?;
            Ok(vec![path])
        }
    }
}

/// Sweep-point values for a config (a single point when no sweep is given).
fn sweep_points(sweep: &Option<SweepSpec>) -> Vec<Option<f64>> {
    match sweep {
        None => vec![None],
        Some(s) => {
            if s.steps == 1 {
                return vec![Some(s.range[0])];
            }
            (0..s.steps)
                .map(|i| {
                    Some(s.range[0] + (s.range[1] - s.range[0]) * i as f64 / (s.steps - 1) as f64)
                })
                .collect()
        }
    }
}

fn table_rows(
    label: &str,
    cfg: &ExperimentConfig,
    out_dir: &Path,
    side_outputs: &mut Vec<PathBuf>,
) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let base_pd = cfg.resolve_pd()?;
    for point in sweep_points(&cfg.sweep) {
        // apply the sweep variable
        let geom = cfg.geometry;
        let mut pd = base_pd;
        let mut n_override = None;
        let mut sigma0_override = None;
        let mut taus = cfg.taus.clone();
        if let (Some(value), Some(sweep)) = (point, &cfg.sweep) {
            match sweep.variable {
                SweepVar::N => n_override = Some(value.round().max(1.0) as usize),
                SweepVar::Pd => pd = value,
                SweepVar::Sigma0 => sigma0_override = Some(value),
                SweepVar::Tau => taus = vec![value],
            }
        }
        let model = LocationModel::new(geom.sigma, geom.region_radius, cfg.truncated_location)?;
        match &cfg.scheme {
            SchemeSpec::AdaptiveSpiral {
                n,
                radii,
                optimize_objective,
                ..
            } => {
                let n = n_override.unwrap_or(*n);
                let partition =
                    resolve_partition(n, radii, optimize_objective, &geom, pd, &model, cfg)?;
                let probs = event_probs(&partition, pd, &model)?;
                let stats = SpiralTimeStats::new(&partition, &probs, &geom)?;
                let ccdfs: Vec<f64> = taus.iter().map(|&t| stats.ccdf(t)).collect();
                let mc = match prepared_mc(cfg, label, &taus, out_dir, side_outputs)? {
                    None => None,
                    Some(mc) => Some(montecarlo::simulate_adaptive_spiral(
                        &partition, &geom, pd, &model, &mc,
                    )?),
                };
                rows.extend(rows_for_point(
                    label,
                    Some(n),
                    pd,
                    None,
                    &taus,
                    Some(stats.mean_s()),
                    &ccdfs,
                    mc.as_ref(),
                ));
            }
            SchemeSpec::Shotgun { sigma0, .. } => {
                let s0 = match (sigma0_override, sigma0) {
                    (Some(v), _) => v,
                    (None, Sigma0Spec::Value(v)) => *v,
                    (None, Sigma0Spec::Keyword(Sigma0Keyword::Optimize)) => {
                        shotgun::optimal_sigma0_mean(geom.sigma)
                    }
                    (None, Sigma0Spec::CcdfOptimal { ccdf_optimal_tau }) => {
                        shotgun::optimal_sigma0_ccdf(*ccdf_optimal_tau, &geom, pd)?.sigma0
                    }
                };
                let firing = FiringDistribution::new(s0)?;
                // a sweep may legitimately pass through the mean-time pole at
                // sigma0 <= sigma: leave the cell empty there
                let mean = shotgun::mean_acq_time(&firing, &geom, pd).ok();
                let ccdfs: Vec<f64> = taus
                    .iter()
                    .map(|&t| shotgun::ccdf(t, &firing, &geom, pd, 1e-12))
                    .collect::<Result<_>>()?;
                let mc = match prepared_mc(cfg, label, &taus, out_dir, side_outputs)? {
                    None => None,
                    Some(mc) => Some(montecarlo::simulate_shotgun(
                        &firing, &geom, pd, &model, &mc,
                    )?),
                };
                rows.extend(rows_for_point(
                    label,
                    None,
                    pd,
                    Some(s0),
                    &taus,
                    mean,
                    &ccdfs,
                    mc.as_ref(),
                ));
            }
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn rows_for_point(
    label: &str,
    n: Option<usize>,
    pd: f64,
    sigma0: Option<f64>,
    taus: &[f64],
    mean: Option<f64>,
    ccdfs: &[f64],
    mc: Option<&McSummary>,
) -> Vec<Row> {
    let base = Row {
        variant: label.to_string(),
        n,
        pd,
        sigma0,
        mean_s: mean,
        mc_mean_s: mc.map(|m| m.empirical_mean),
        mc_mean_stderr_s: mc.map(|m| m.mean_stderr),
        ..Row::default()
    };
    if taus.is_empty() {
        return vec![base];
    }
    taus.iter()
        .zip(ccdfs)
        .map(|(&tau, &ccdf)| {
            let mc_pt = mc.and_then(|m| m.ccdf_points.iter().find(|p| (p.tau - tau).abs() < 1e-12));
            Row {
                tau: Some(tau),
                ccdf: Some(ccdf),
                mc_ccdf: mc_pt.map(|p| p.estimate),
                mc_ccdf_stderr: mc_pt.map(|p| p.stderr),
                ..base.clone()
            }
        })
        .collect()
}

fn resolve_partition(
    n: usize,
    radii: &RadiiSpec,
    objective: &Option<ObjectiveSpec>,
    geom: &ScanGeometry,
    pd: f64,
    model: &LocationModel,
    cfg: &ExperimentConfig,
) -> Result<Partition> {
    match radii {
        RadiiSpec::Explicit(r) => Partition::new(r.clone(), geom),
        RadiiSpec::Keyword(super::config::RadiiKeyword::Uniform) => Partition::uniform(n, geom),
        RadiiSpec::Keyword(super::config::RadiiKeyword::Optimize) => {
            let obj = match objective.unwrap_or(ObjectiveSpec::Mean) {
                ObjectiveSpec::Mean => Objective::Mean,
                ObjectiveSpec::Ccdf { tau } => Objective::Ccdf { tau },
            };
            let result = ga::optimize(obj, n, geom, pd, model, &cfg.ga)?;
            Ok(result.partition)
        }
    }
}

fn resolved_spiral_layout(cfg: &ExperimentConfig) -> Result<(Partition, f64)> {
    let pd = cfg.resolve_pd()?;
    let model = LocationModel::new(
        cfg.geometry.sigma,
        cfg.geometry.region_radius,
        cfg.truncated_location,
    )?;
    match &cfg.scheme {
        SchemeSpec::AdaptiveSpiral {
            n,
            radii,
            optimize_objective,
            ..
        } => {
            let partition = resolve_partition(
                *n,
                radii,
                optimize_objective,
                &cfg.geometry,
                pd,
                &model,
                cfg,
            )?;
            let probs = event_probs(&partition, pd, &model)?;
            let stats = SpiralTimeStats::new(&partition, &probs, &cfg.geometry)?;
            Ok((partition, stats.mean_s()))
        }
        SchemeSpec::Shotgun { .. } => Err(Error::config(
            "a radii layout needs the adaptive_spiral scheme",
        )),
    }
}

/// Clone the MC section, evaluating the empirical CCDF wherever the closed
/// forms are evaluated and anchoring a relative dump path inside `out_dir`.
fn prepared_mc(
    cfg: &ExperimentConfig,
    label: &str,
    taus: &[f64],
    out_dir: &Path,
    side_outputs: &mut Vec<PathBuf>,
) -> Result<Option<McConfig>> {
    let Some(mc) = &cfg.mc else {
        return Ok(None);
    };
    let mut mc = mc.clone();
    mc.ccdf_taus = taus.to_vec();
    if let Some(dump) = &mc.trial_dump {
        if cfg.sweep.is_some() {
            return Err(Error::config(
                "trial_dump requires a single-point run (no sweep)",
            ));
        }
        let mut resolved = if dump.is_relative() {
            out_dir.join(dump)
        } else {
            dump.clone()
        };
        if label != "run" {
            // keep dumps from different labeled runs apart
            let name = resolved.file_name().unwrap().to_string_lossy().into_owned();
            resolved.set_file_name(format!("{label}_{name}"));
        }
        side_outputs.push(resolved.clone());
        mc.trial_dump = Some(resolved);
    }
    Ok(Some(mc))
}

/// Run a single config file: the library entry behind `--config`.
pub fn run_config_file(config_path: &Path, out_dir: &Path) -> Result<RunArtifacts> {
    let cfg = ExperimentConfig::load(config_path)?;
    let task = TaskSpec::Table {
        runs: vec![LabeledConfig {
            label: "run".to_string(),
            config: cfg,
        }],
    };
    run_task(&task, None, out_dir)
}
