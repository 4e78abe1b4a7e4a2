//! Versioned TOML/JSON experiment configs with field-path error messages.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Parses `path` as TOML (`.toml`) or JSON (anything else) into `T`.
///
/// Errors name the offending field, e.g. `ensemble.r: invalid type`.
pub fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
    };
    check_schema(&value).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        CliError::config(format!("{}: field `{field}`: {}", path.display(), e.inner()))
    })
}

fn check_schema(v: &serde_json::Value) -> Result<(), String> {
    match v.get("schema") {
        None => Err("field `schema`: missing (expected 1)".into()),
        Some(s) if s.as_u64() == Some(SCHEMA_VERSION as u64) => Ok(()),
        Some(s) => Err(format!("field `schema`: unsupported version {s} (expected {SCHEMA_VERSION})")),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    #[serde(default = "default_nr")]
    pub nr: usize,
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub phi_b: f64,
    #[serde(default)]
    pub phi_e: f64,
    #[serde(default = "one")]
    pub gamma: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self { nr: default_nr(), r: 0.0, phi_b: 0.0, phi_e: 0.0, gamma: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IpcConfig {
    pub np: usize,
    pub phi_p: f64,
    pub limit_db: f64,
}

/// Experiment config; every field except `schema` may also come from flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Checked by [`load`] before the rest of the document.
    #[allow(dead_code)]
    pub schema: u32,
    pub suite: Option<String>,
    pub trials: Option<usize>,
    pub snr_db: Option<Vec<f64>>,
    pub channel: Option<PathBuf>,
    pub algos: Option<Vec<String>>,
    pub nt: Option<Vec<usize>>,
    pub ne: Option<Vec<usize>>,
    pub phi_e: Option<Vec<f64>>,
    pub iters: Option<usize>,
    pub step: Option<f64>,
    pub papc_factor: Option<f64>,
    pub ensemble: Option<EnsembleConfig>,
    pub ipc: Option<IpcConfig>,
}

fn default_nr() -> usize {
    4
}

fn one() -> f64 {
    1.0
}
