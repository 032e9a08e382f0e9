use std::path::{Path, PathBuf};

use fracsource_core::inverse::SolverConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::presets::Preset;

/// JSON schema every configuration is validated against.
pub const RUN_CONFIG_SCHEMA: &str = include_str!("../schema/run_config.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Forward,
    Inverse,
    Verify,
    Mms,
    Study,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Refine {
    /// Halve `Δt` at fixed `M`.
    Time,
    /// Halve `Δx` at fixed `N`.
    Space,
    /// Halve both.
    Joint,
    /// Double `K` from 1.
    Modes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub preset: Preset,
    /// CSV `(t, x, value)` with measured `ψ` on the run grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySpec {
    pub refine: Refine,
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "one")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub alpha: f64,
    pub final_time: f64,
    pub time_nodes: usize,
    pub space_nodes: usize,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_tol")]
    pub tol_rel: f64,
    #[serde(default = "default_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub denominator_guard: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub problem: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudySpec>,
}

fn one() -> u32 {
    1
}

fn default_modes() -> usize {
    SolverConfig::default().modes
}

fn default_epsilon() -> f64 {
    SolverConfig::default().epsilon
}

fn default_tol() -> f64 {
    SolverConfig::default().tol_rel
}

fn default_iters() -> usize {
    SolverConfig::default().max_iters
}

impl RunConfig {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            modes: self.modes,
            epsilon: self.epsilon,
            max_iters: self.max_iters,
            tol_rel: self.tol_rel,
            denominator_guard: self.denominator_guard,
        }
    }

    /// Parse and schema-check a configuration document.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: Value = serde_json::from_str(text)?;
        validate(&value, RUN_CONFIG_SCHEMA, "configuration")?;
        let cfg: RunConfig = serde_json::from_value(value)?;
        Ok(cfg)
    }

    /// Load from `path`; a relative `psi_file` is resolved against the
    /// configuration's directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let (Some(psi), Some(dir)) = (&cfg.problem.psi_file, path.parent()) {
            if psi.is_relative() {
                cfg.problem.psi_file = Some(dir.join(psi));
            }
        }
        Ok(cfg)
    }
}

/// Validate `value` against the JSON schema text `schema`.
pub fn validate(value: &Value, schema: &str, what: &str) -> CliResult<()> {
    let schema: Value = serde_json::from_str(schema)?;
    let validator = jsonschema::validator_for(&schema)
        .map_err(|e| CliError::Usage(format!("invalid {what} schema: {e}")))?;
    let errors: Vec<String> = validator
        .iter_errors(value)
        .map(|e| format!("{} at '{}'", e, e.instance_path()))
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} rejected: {}", errors.join("; "))))
    }
}
