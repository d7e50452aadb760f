//! JSON experiment configuration (schema version 1).

use serde::{Deserialize, Serialize};

use crate::detection::{prob_detection, threshold_for_pfa, ChannelParams};
use crate::error::{Error, Result};
use crate::ga::GaConfig;
use crate::montecarlo::McConfig;
use crate::region::ScanGeometry;

pub const SCHEMA_VERSION: u32 = 1;

/// One experiment: a geometry, exactly one scheme, and optional sweep /
/// Monte-Carlo sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Photon-channel parameters; when present (and the scheme omits `pd`)
    /// the detection probability is derived from them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSpec>,
    pub geometry: ScanGeometry,
    pub scheme: SchemeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    /// Time thresholds at which closed-form CCDFs are evaluated.
    #[serde(default = "default_taus")]
    pub taus: Vec<f64>,
    /// Condition the location law on the receiver being inside the region.
    #[serde(default = "default_true")]
    pub truncated_location: bool,
    #[serde(default)]
    pub ga: GaConfig,
    /// Output file names, relative to the run's output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputSpec>,
}

/// Output naming overrides (single-config runs only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub results_csv: Option<String>,
}

fn default_taus() -> Vec<f64> {
    vec![80.0]
}

fn default_true() -> bool {
    true
}

/// Channel description: [`ChannelParams`] plus the false-alarm target that
/// fixes the count threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(flatten)]
    pub params: ChannelParams,
    pub pfa_target: f64,
}

/// Exactly one acquisition scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SchemeSpec {
    AdaptiveSpiral {
        n: usize,
        #[serde(default)]
        radii: RadiiSpec,
        /// Detection probability; derived from `channel` when omitted.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pd: Option<f64>,
        /// Objective minimized when `radii` is `"optimize"`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        optimize_objective: Option<ObjectiveSpec>,
    },
    Shotgun {
        sigma0: Sigma0Spec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pd: Option<f64>,
    },
}

/// Subregion radii: evenly spaced, optimizer-chosen, or explicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiiSpec {
    Keyword(RadiiKeyword),
    Explicit(Vec<f64>),
}

impl Default for RadiiSpec {
    fn default() -> Self {
        RadiiSpec::Keyword(RadiiKeyword::Uniform)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiiKeyword {
    Uniform,
    Optimize,
}

impl RadiiSpec {
    pub fn is_optimize(&self) -> bool {
        matches!(self, RadiiSpec::Keyword(RadiiKeyword::Optimize))
    }
}

/// Firing spread: a number, the keyword `"optimize"` (argmin of the mean,
/// sqrt(2) sigma), or `{"ccdf_optimal_tau": t}` (numeric argmin of P(T > t)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sigma0Spec {
    Keyword(Sigma0Keyword),
    CcdfOptimal { ccdf_optimal_tau: f64 },
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma0Keyword {
    Optimize,
}

/// GA objective selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Mean,
    Ccdf { tau: f64 },
}

/// Sweep one variable over an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub range: [f64; 2],
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    N,
    Pd,
    Sigma0,
    Tau,
}

impl ExperimentConfig {
    /// Validate field combinations that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        ScanGeometry::new(
            self.geometry.beam_radius,
            self.geometry.dwell_time,
            self.geometry.sigma,
            self.geometry.region_radius,
        )
        .map_err(|e| Error::config(e.to_string()))?;
        match &self.scheme {
            SchemeSpec::AdaptiveSpiral { n, radii, pd, .. } => {
                if *n == 0 {
                    return Err(Error::config("adaptive_spiral.n must be at least 1"));
                }
                if let RadiiSpec::Explicit(r) = radii {
                    if r.len() != *n {
                        return Err(Error::config(format!(
                            "explicit radii count {} does not match n = {n}",
                            r.len()
                        )));
                    }
                }
                self.check_pd(*pd)?;
            }
            SchemeSpec::Shotgun { sigma0, pd } => {
                if let Sigma0Spec::Value(v) = sigma0 {
                    if *v <= 0.0 {
                        return Err(Error::config("shotgun.sigma0 must be positive"));
                    }
                }
                self.check_pd(*pd)?;
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.steps == 0 {
                return Err(Error::config("sweep.steps must be at least 1"));
            }
            if !(sweep.range[0] <= sweep.range[1]) {
                return Err(Error::config("sweep.range must be ordered"));
            }
            let spiral = matches!(self.scheme, SchemeSpec::AdaptiveSpiral { .. });
            match sweep.variable {
                SweepVar::N if !spiral => {
                    return Err(Error::config(
                        "sweep over n requires the adaptive_spiral scheme",
                    ))
                }
                SweepVar::N => {
                    if let SchemeSpec::AdaptiveSpiral {
                        radii: RadiiSpec::Explicit(_),
                        ..
                    } = &self.scheme
                    {
                        return Err(Error::config(
                            "sweep over n cannot use an explicit radii list",
                        ));
                    }
                }
                SweepVar::Sigma0 if spiral => {
                    return Err(Error::config(
                        "sweep over sigma0 requires the shotgun scheme",
                    ))
                }
                _ => {}
            }
        }
        for &tau in &self.taus {
            if tau < 0.0 {
                return Err(Error::config("taus must be non-negative"));
            }
        }
        Ok(())
    }

    fn check_pd(&self, pd: Option<f64>) -> Result<()> {
        match pd {
            Some(p) if !(0.0 < p && p <= 1.0) => Err(Error::config("pd must lie in (0, 1]")),
            None if self.channel.is_none() => Err(Error::config(
                "scheme needs either an explicit pd or a channel section to derive it",
            )),
            _ => Ok(()),
        }
    }

    /// Detection probability: explicit `pd`, or derived from the channel by
    /// picking the count threshold for its false-alarm target.
    pub fn resolve_pd(&self) -> Result<f64> {
        let pd = match &self.scheme {
            SchemeSpec::AdaptiveSpiral { pd, .. } | SchemeSpec::Shotgun { pd, .. } => *pd,
        };
        if let Some(p) = pd {
            return Ok(p);
        }
        let channel = self
            .channel
            .as_ref()
            .ok_or_else(|| Error::config("no pd and no channel to derive it from"))?;
        let det = threshold_for_pfa(channel.params.noise_mean(), channel.pfa_target)?;
        prob_detection(&channel.params, self.geometry.beam_radius, &det)
    }

    /// Load and validate a config file.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "geometry": {"beam_radius": 0.2, "dwell_time": 1e-4, "sigma": 15.0, "region_radius": 50.0},
            "scheme": {"adaptive_spiral": {"n": 7, "radii": "uniform", "pd": 0.05}}
        })
    }

    #[test]
    fn parses_minimal_config() {
        let cfg: ExperimentConfig = serde_json::from_value(base_json()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.taus, vec![80.0]);
        assert!(cfg.truncated_location);
        assert!((cfg.resolve_pd().unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn parses_explicit_radii_and_sigma0_keyword() {
        let mut v = base_json();
        v["scheme"] =
            serde_json::json!({"adaptive_spiral": {"n": 2, "radii": [20.0, 50.0], "pd": 0.05}});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        cfg.validate().unwrap();
        let mut v = base_json();
        v["scheme"] = serde_json::json!({"shotgun": {"sigma0": "optimize", "pd": 0.05}});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        cfg.validate().unwrap();
        assert!(matches!(
            cfg.scheme,
            SchemeSpec::Shotgun {
                sigma0: Sigma0Spec::Keyword(Sigma0Keyword::Optimize),
                ..
            }
        ));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut v = base_json();
        v["schema_version"] = serde_json::json!(2);
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());

        let mut v = base_json();
        v["scheme"] =
            serde_json::json!({"adaptive_spiral": {"n": 3, "radii": [20.0, 50.0], "pd": 0.05}});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());

        let mut v = base_json();
        v["scheme"] = serde_json::json!({"adaptive_spiral": {"n": 3, "pd": 0.05}});
        v["sweep"] = serde_json::json!({"variable": "sigma0", "range": [15.0, 60.0], "steps": 10});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());

        // pd missing and no channel
        let mut v = base_json();
        v["scheme"] = serde_json::json!({"adaptive_spiral": {"n": 3}});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn derives_pd_from_channel() {
        let mut v = base_json();
        v["channel"] = serde_json::json!({
            "signal_power": 25.0 * std::f64::consts::PI * 0.04,
            "noise_intensity": 13.0,
            "detector_area": 1.0,
            "obs_interval": 1.0,
            "pfa_target": 1e-12
        });
        v["scheme"] = serde_json::json!({"adaptive_spiral": {"n": 7}});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        cfg.validate().unwrap();
        let pd = cfg.resolve_pd().unwrap();
        // mu1 = 38, gamma0 = threshold_for_pfa(13, 1e-12): tail ~ 0.114
        assert!((0.05..0.2).contains(&pd), "pd = {pd}");
    }

    #[test]
    fn round_trips_through_json() {
        let cfg: ExperimentConfig = serde_json::from_value(base_json()).unwrap();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
