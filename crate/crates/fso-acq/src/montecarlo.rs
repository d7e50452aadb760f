//! Discrete-event simulation oracle for both schemes.
//!
//! Nothing here evaluates a closed form: trials draw receiver locations,
//! walk the scan schedule (or fire shots) and flip detection coins, so the
//! empirical summaries are an independent check on every analytic result.
//! Per-trial RNG substreams are derived from the master seed by counter
//! splitting, so a summary depends only on its [`McConfig`].

use std::io::Write;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::region::{LocationModel, Partition, ScanGeometry};
use crate::shotgun::{hit_prob, hit_prob_exact_fixed, FiringDistribution};

/// Photon-level detection model: each illumination draws a Poisson count and
/// compares it against the threshold instead of flipping a Bernoulli(P_D)
/// coin.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhotonDetection {
    /// Mean signal-plus-noise count while the beam covers the receiver.
    pub mean_count: f64,
    /// Detect when the drawn count strictly exceeds this threshold.
    pub count_threshold: u32,
}

/// Simulation controls.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Shotgun: decide hits from the exact disk-overlap probability instead
    /// of the density-times-area approximation.
    pub exact_shot_geometry: bool,
    /// Simulate detection at the photon-count level when set.
    pub photon_level: Option<PhotonDetection>,
    /// Spiral: keep the drawn location across failed scans instead of
    /// redrawing it (probes the scan-independence assumption behind the
    /// closed forms; the redraw default matches them).
    pub persistent_location: bool,
    /// Spiral: walk the discrete spiral waypoints instead of the continuous
    /// reach-time model (probes the discretization error; much slower).
    /// Beam disks at the 2-rho spacing do not tile the plane, so combine
    /// this with `persistent_location` only if a never-illuminated receiver
    /// running into the scan guard is acceptable.
    pub waypoint_walk: bool,
    /// Evaluate the empirical CCDF at these thresholds.
    pub ccdf_taus: Vec<f64>,
    /// Stream raw per-trial times as little-endian f64 to this file.
    pub trial_dump: Option<PathBuf>,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 1,
            exact_shot_geometry: false,
            photon_level: None,
            persistent_location: false,
            waypoint_walk: false,
            ccdf_taus: vec![80.0],
            trial_dump: None,
        }
    }
}

/// Empirical CCDF estimate at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CcdfPoint {
    pub tau: f64,
    pub estimate: f64,
    /// Binomial standard error sqrt(p (1 - p) / n).
    pub stderr: f64,
}

/// Summary statistics over all trials.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct McSummary {
    pub empirical_mean: f64,
    /// Sample standard deviation divided by sqrt(trials).
    pub mean_stderr: f64,
    pub ccdf_points: Vec<CcdfPoint>,
    pub trials_used: u64,
}

/// Hard cap on shots (or scans) within one trial; hitting it signals a
/// pathological parameter regime rather than a long tail.
const RUNAWAY_LIMIT: f64 = 1e9;

fn trial_rng(seed: u64, domain: u64, trial: u64) -> ChaCha8Rng {
    let mut z = seed ^ domain.rotate_left(16) ^ trial.rotate_left(40);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

const DOMAIN_SPIRAL: u64 = 0x5350;
const DOMAIN_SHOTGUN: u64 = 0x5347;
const DOMAIN_DETECT: u64 = 0x4454;

/// Truncated-Rayleigh radius draw: the scheme only terminates for receivers
/// inside the region, so the simulation conditions on presence (the failure
/// probability of the analytic model is likewise defined given presence).
fn draw_radius<R: Rng>(rng: &mut R, model: &LocationModel) -> f64 {
    let u: f64 = rng.gen();
    let mass = model.region_mass();
    model.sigma * (-2.0 * (1.0 - u * mass).ln()).sqrt()
}

/// Simulate the adaptive spiral scheme and summarize the acquisition times.
pub fn simulate_adaptive_spiral(
    partition: &Partition,
    geom: &ScanGeometry,
    p_d: f64,
    model: &LocationModel,
    cfg: &McConfig,
) -> Result<McSummary> {
    if cfg.trials == 0 {
        return Err(Error::config("need at least one trial"));
    }
    if !(0.0 < p_d && p_d <= 1.0) {
        return Err(Error::domain("detection probability must lie in (0, 1]"));
    }
    let n = partition.n();
    let subscan_times: Vec<f64> = (1..=n)
        .map(|k| geom.scan_time(partition.radii()[k - 1]))
        .collect::<Result<_>>()?;
    // waypoint-walk mode: subscan k visits the spiral prefix below radius r_k
    let waypoints = if cfg.waypoint_walk {
        Some(crate::region::spiral_waypoints(geom, geom.region_radius)?)
    } else {
        None
    };
    let prefix_len: Vec<usize> = match &waypoints {
        Some(wp) => partition
            .radii()
            .iter()
            .map(|&r| wp.partition_point(|w| w.radius <= r))
            .collect(),
        None => Vec::new(),
    };

    let mut times = Vec::with_capacity(cfg.trials as usize);
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, DOMAIN_SPIRAL, trial);
        let mut r = draw_radius(&mut rng, model);
        let mut theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut elapsed = 0.0;
        let mut detected = false;
        let mut scans = 0.0;
        while !detected {
            if let Some(wp) = &waypoints {
                // discrete spiral: an illumination is a dwell within one beam
                // radius of the receiver
                let (rx, ry) = (r * theta.cos(), r * theta.sin());
                for k in 0..n {
                    let mut found = false;
                    for w in wp.iter().take(prefix_len[k]) {
                        elapsed += geom.dwell_time;
                        let (wx, wy) = w.xy();
                        let within =
                            (wx - rx).powi(2) + (wy - ry).powi(2) <= geom.beam_radius.powi(2);
                        if within && detect(&mut rng, p_d, cfg) {
                            found = true;
                            break;
                        }
                    }
                    if found {
                        detected = true;
                        break;
                    }
                }
            } else {
                for k in 0..n {
                    if r <= partition.radii()[k] && detect(&mut rng, p_d, cfg) {
                        elapsed += geom.scan_time(r)?;
                        detected = true;
                        break;
                    }
                    elapsed += subscan_times[k];
                }
            }
            if !detected {
                scans += 1.0;
                if scans >= RUNAWAY_LIMIT {
                    return Err(Error::convergence(format!(
                        "trial {trial} exceeded {RUNAWAY_LIMIT:e} scans"
                    )));
                }
                if !cfg.persistent_location {
                    r = draw_radius(&mut rng, model);
                    theta = rng.gen_range(0.0..std::f64::consts::TAU);
                }
            }
        }
        times.push(elapsed);
    }
    summarize(times, cfg)
}

fn detect<R: Rng>(rng: &mut R, p_d: f64, cfg: &McConfig) -> bool {
    match &cfg.photon_level {
        None => rng.gen::<f64>() < p_d,
        Some(photon) => {
            let draw = Poisson::new(photon.mean_count)
                .expect("validated mean")
                .sample(rng);
            draw > photon.count_threshold as f64
        }
    }
}

/// Simulate the shotgun scheme and summarize the acquisition times.
///
/// Receiver locations follow the unbounded Gaussian of the analytic model
/// (conditioning them on the region would bias the comparison); shots are
/// independent, so the count until the first success is drawn directly from
/// its geometric law instead of looping over individual shots.
pub fn simulate_shotgun(
    firing: &FiringDistribution,
    geom: &ScanGeometry,
    p_d: f64,
    model: &LocationModel,
    cfg: &McConfig,
) -> Result<McSummary> {
    if cfg.trials == 0 {
        return Err(Error::config("need at least one trial"));
    }
    if !(0.0 < p_d && p_d <= 1.0) {
        return Err(Error::domain("detection probability must lie in (0, 1]"));
    }
    let per_illumination = match &cfg.photon_level {
        None => p_d,
        Some(photon) => crate::detection::poisson_tail(photon.count_threshold, photon.mean_count)?,
    };
    let mut times = Vec::with_capacity(cfg.trials as usize);
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, DOMAIN_SHOTGUN, trial);
        let x = model.sigma * rng.sample::<f64, _>(rand_distr::StandardNormal);
        let y = model.sigma * rng.sample::<f64, _>(rand_distr::StandardNormal);
        let hit = if cfg.exact_shot_geometry {
            hit_prob_exact_fixed(x, y, geom.beam_radius, firing, 32)
        } else {
            hit_prob(x, y, geom.beam_radius, firing, false)?
        };
        let q = hit * per_illumination;
        // shots to first success, inclusive: 1 + Geometric(q)
        let u: f64 = rng.gen();
        let shots = if q <= 0.0 {
            f64::INFINITY
        } else if q >= 1.0 {
            1.0
        } else {
            1.0 + (u.ln() / (-q).ln_1p()).floor()
        };
        if !(shots <= RUNAWAY_LIMIT) {
            return Err(Error::convergence(format!(
                "trial {trial} needed {shots:e} shots (> {RUNAWAY_LIMIT:e}); \
                 sigma0 or p_d is pathologically small"
            )));
        }
        times.push(shots * geom.dwell_time);
    }
    summarize(times, cfg)
}

/// Empirical exceedance probability of a Poisson count over a threshold.
pub fn simulate_detection(mu: f64, gamma0: u32, cfg: &McConfig) -> Result<f64> {
    if mu <= 0.0 {
        return Err(Error::domain("poisson mean must be positive"));
    }
    if cfg.trials == 0 {
        return Err(Error::config("need at least one trial"));
    }
    let poisson = Poisson::new(mu).map_err(|_| Error::domain("invalid poisson mean"))?;
    let mut hits = 0u64;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, DOMAIN_DETECT, trial);
        if poisson.sample(&mut rng) > gamma0 as f64 {
            hits += 1;
        }
    }
    Ok(hits as f64 / cfg.trials as f64)
}

/// Pairwise summation keeps the aggregate independent of chunking.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn summarize(times: Vec<f64>, cfg: &McConfig) -> Result<McSummary> {
    let n = times.len() as f64;
    let mean = pairwise_sum(&times) / n;
    let sq: Vec<f64> = times.iter().map(|t| (t - mean) * (t - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0).max(1.0);
    let mean_stderr = (var / n).sqrt();
    let ccdf_points = cfg
        .ccdf_taus
        .iter()
        .map(|&tau| {
            let exceed = times.iter().filter(|&&t| t > tau).count() as f64;
            let p = exceed / n;
            CcdfPoint {
                tau,
                estimate: p,
                stderr: (p * (1.0 - p) / n).sqrt(),
            }
        })
        .collect();
    if let Some(path) = &cfg.trial_dump {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        for t in &times {
            file.write_all(&t.to_le_bytes())?;
        }
        file.flush()?;
    }
    Ok(McSummary {
        empirical_mean: mean,
        mean_stderr,
        ccdf_points,
        trials_used: times.len() as u64,
    })
}
