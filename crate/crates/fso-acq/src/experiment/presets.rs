//! Named experiment bundles reproducing the reference operating point:
//! region radius 50 m, location sigma 15 m, beam radius 0.2 m, dwell time
//! 0.1 ms, detection probabilities 0.02-0.08, false-alarm target 1e-12.

use super::config::{
    ExperimentConfig, ObjectiveSpec, RadiiKeyword, RadiiSpec, SchemeSpec, Sigma0Spec, SweepSpec,
    SweepVar, SCHEMA_VERSION,
};
use super::runner::{LabeledConfig, TaskSpec};
use crate::error::{Error, Result};
use crate::ga::GaConfig;
use crate::region::ScanGeometry;

/// Reference geometry shared by every preset.
pub fn reference_geometry() -> ScanGeometry {
    ScanGeometry {
        beam_radius: 0.2,
        dwell_time: 1e-4,
        sigma: 15.0,
        region_radius: 50.0,
    }
}

const PD_GRID: [f64; 3] = [0.02, 0.05, 0.08];

/// Known preset names.
pub const PRESET_NAMES: [&str; 9] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig10",
];

fn base(scheme: SchemeSpec) -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        channel: None,
        geometry: reference_geometry(),
        scheme,
        sweep: None,
        mc: None,
        taus: vec![80.0],
        truncated_location: true,
        ga: GaConfig::default(),
        outputs: None,
    }
}

fn spiral(n: usize, radii: RadiiSpec, pd: f64, objective: Option<ObjectiveSpec>) -> SchemeSpec {
    SchemeSpec::AdaptiveSpiral {
        n,
        radii,
        pd: Some(pd),
        optimize_objective: objective,
    }
}

fn n_sweep() -> Option<SweepSpec> {
    Some(SweepSpec {
        variable: SweepVar::N,
        range: [1.0, 7.0],
        steps: 7,
    })
}

fn pd_sweep() -> Option<SweepSpec> {
    Some(SweepSpec {
        variable: SweepVar::Pd,
        range: [0.02, 0.08],
        steps: 7,
    })
}

fn sigma0_sweep(steps: usize) -> Option<SweepSpec> {
    Some(SweepSpec {
        variable: SweepVar::Sigma0,
        range: [15.025, 60.0],
        steps,
    })
}

/// Build the task for a named preset.
pub fn preset_task(name: &str) -> Result<TaskSpec> {
    let uniform = RadiiSpec::Keyword(RadiiKeyword::Uniform);
    let optimize = RadiiSpec::Keyword(RadiiKeyword::Optimize);
    match name {
        // mean acquisition time vs N, evenly spaced radii, one curve per P_D
        "fig1" => Ok(TaskSpec::Table {
            runs: PD_GRID
                .iter()
                .map(|&pd| LabeledConfig {
                    label: format!("pd_{pd}"),
                    config: ExperimentConfig {
                        sweep: n_sweep(),
                        taus: vec![],
                        ..base(spiral(7, uniform.clone(), pd, None))
                    },
                })
                .collect(),
        }),
        // P(T > 80 s) vs N, evenly spaced radii, one curve per P_D
        "fig2" => Ok(TaskSpec::Table {
            runs: PD_GRID
                .iter()
                .map(|&pd| LabeledConfig {
                    label: format!("pd_{pd}"),
                    config: ExperimentConfig {
                        sweep: n_sweep(),
                        ..base(spiral(7, uniform.clone(), pd, None))
                    },
                })
                .collect(),
        }),
        // mean vs N: evenly spaced against optimized radii at P_D = 0.05
        "fig3" => Ok(TaskSpec::Table {
            runs: vec![
                LabeledConfig {
                    label: "uniform".into(),
                    config: ExperimentConfig {
                        sweep: n_sweep(),
                        taus: vec![],
                        ..base(spiral(7, uniform.clone(), 0.05, None))
                    },
                },
                LabeledConfig {
                    label: "optimized".into(),
                    config: ExperimentConfig {
                        sweep: n_sweep(),
                        taus: vec![],
                        ..base(spiral(7, optimize.clone(), 0.05, Some(ObjectiveSpec::Mean)))
                    },
                },
            ],
        }),
        // P(T > 80 s) vs N: evenly spaced against ccdf-optimized radii
        "fig4" => Ok(TaskSpec::Table {
            runs: vec![
                LabeledConfig {
                    label: "uniform".into(),
                    config: ExperimentConfig {
                        sweep: n_sweep(),
                        ..base(spiral(7, uniform.clone(), 0.05, None))
                    },
                },
                LabeledConfig {
                    label: "optimized".into(),
                    config: ExperimentConfig {
                        sweep: n_sweep(),
                        ..base(spiral(
                            7,
                            optimize.clone(),
                            0.05,
                            Some(ObjectiveSpec::Ccdf { tau: 80.0 }),
                        ))
                    },
                },
            ],
        }),
        // mean vs P_D: mean-optimized spiral (N = 7) against the shotgun at
        // its mean-optimal spread
        "fig5" => Ok(TaskSpec::Table {
            runs: vec![
                LabeledConfig {
                    label: "spiral_optimized_n7".into(),
                    config: ExperimentConfig {
                        sweep: pd_sweep(),
                        taus: vec![],
                        ..base(spiral(7, optimize.clone(), 0.05, Some(ObjectiveSpec::Mean)))
                    },
                },
                LabeledConfig {
                    label: "shotgun_optimal".into(),
                    config: ExperimentConfig {
                        sweep: pd_sweep(),
                        taus: vec![],
                        ..base(SchemeSpec::Shotgun {
                            sigma0: Sigma0Spec::Keyword(super::config::Sigma0Keyword::Optimize),
                            pd: Some(0.05),
                        })
                    },
                },
            ],
        }),
        // P(T > 80 s) vs P_D: ccdf-optimized spirals (N = 1, 2, 7) against
        // the shotgun at its ccdf-optimal spread per P_D
        "fig6" => {
            let mut runs: Vec<LabeledConfig> = [1usize, 2, 7]
                .iter()
                .map(|&n| LabeledConfig {
                    label: format!("spiral_optimized_n{n}"),
                    config: ExperimentConfig {
                        sweep: pd_sweep(),
                        ..base(spiral(
                            n,
                            optimize.clone(),
                            0.05,
                            Some(ObjectiveSpec::Ccdf { tau: 80.0 }),
                        ))
                    },
                })
                .collect();
            runs.push(LabeledConfig {
                label: "shotgun_ccdf_optimal".into(),
                config: ExperimentConfig {
                    sweep: pd_sweep(),
                    ..base(SchemeSpec::Shotgun {
                        sigma0: Sigma0Spec::CcdfOptimal {
                            ccdf_optimal_tau: 80.0,
                        },
                        pd: Some(0.05),
                    })
                },
            });
            Ok(TaskSpec::Table { runs })
        }
        // subregion layouts, evenly spaced against mean-optimized, N = 7
        "fig7" => Ok(TaskSpec::RadiiLayout {
            runs: vec![
                LabeledConfig {
                    label: "uniform".into(),
                    config: base(spiral(7, uniform.clone(), 0.05, None)),
                },
                LabeledConfig {
                    label: "optimized".into(),
                    config: base(spiral(7, optimize.clone(), 0.05, Some(ObjectiveSpec::Mean))),
                },
            ],
        }),
        // shotgun mean vs firing spread (the pole sits at sigma = 15 m)
        "fig8" => Ok(TaskSpec::Table {
            runs: vec![LabeledConfig {
                label: "shotgun".into(),
                config: ExperimentConfig {
                    sweep: sigma0_sweep(1800),
                    taus: vec![],
                    ..base(SchemeSpec::Shotgun {
                        sigma0: Sigma0Spec::Value(21.2132),
                        pd: Some(0.05),
                    })
                },
            }],
        }),
        // shotgun ccdf vs firing spread: per-P_D curves at tau = 80 s and
        // per-tau curves at P_D = 0.05
        "fig10" => {
            let mut runs: Vec<LabeledConfig> = PD_GRID
                .iter()
                .map(|&pd| LabeledConfig {
                    label: format!("tau80_pd_{pd}"),
                    config: ExperimentConfig {
                        sweep: sigma0_sweep(300),
                        ..base(SchemeSpec::Shotgun {
                            sigma0: Sigma0Spec::Value(21.2132),
                            pd: Some(pd),
                        })
                    },
                })
                .collect();
            for tau in [40.0, 120.0] {
                runs.push(LabeledConfig {
                    label: format!("pd0.05_tau_{tau}"),
                    config: ExperimentConfig {
                        sweep: sigma0_sweep(300),
                        taus: vec![tau],
                        ..base(SchemeSpec::Shotgun {
                            sigma0: Sigma0Spec::Value(21.2132),
                            pd: Some(0.05),
                        })
                    },
                });
            }
            Ok(TaskSpec::Table { runs })
        }
        other => Err(Error::config(format!(
            "unknown preset '{other}' (known: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_build_and_validate() {
        for name in PRESET_NAMES {
            let task = preset_task(name).unwrap();
            match task {
                TaskSpec::Table { runs } | TaskSpec::RadiiLayout { runs } => {
                    assert!(!runs.is_empty(), "{name}");
                    for run in runs {
                        run.config.validate().expect(name);
                    }
                }
                _ => panic!("presets are tables"),
            }
        }
        assert!(preset_task("fig9").is_err());
        assert!(preset_task("bogus").is_err());
    }
}
