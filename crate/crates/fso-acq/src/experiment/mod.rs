//! JSON-configured experiment runner: sweeps, optimization, simulation, and
//! reproducible CSV/manifest outputs.

mod config;
mod presets;
mod runner;

pub use config::{
    ChannelSpec, ExperimentConfig, ObjectiveSpec, OutputSpec, RadiiKeyword, RadiiSpec, SchemeSpec,
    Sigma0Keyword, Sigma0Spec, SweepSpec, SweepVar, SCHEMA_VERSION,
};
pub use presets::{preset_task, reference_geometry, PRESET_NAMES};
pub use runner::{
    rerun_manifest, run_config_file, run_task, LabeledConfig, Manifest, RunArtifacts, TaskSpec,
};
