//! JSON run configurations for the CLI.
//!
//! A config file is a single JSON object whose `command` field names one
//! of the subcommands; the remaining fields are that command's settings.
//! Unknown fields are rejected so typos fail loudly.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::PipelineError;
use crate::pipeline::{CodeParams, DeletionMode, ExperimentConfig, LogicalStateSpec};
use crate::rate::{parse_gamma, RateQuery};

fn default_tolerance() -> f64 {
    1e-9
}

/// Settings for `qdelsim verify`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub params: CodeParams,
    pub logical_states: Vec<LogicalStateSpec>,
    pub deletion_mode: DeletionMode,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, alias = "seed")]
    pub master_seed: u64,
    #[serde(default, alias = "out")]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub corrupt_loc_offset: bool,
}

impl VerifyConfig {
    pub fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            params: self.params.clone(),
            logical_states: self.logical_states.clone(),
            deletion_mode: self.deletion_mode.clone(),
            tolerance: self.tolerance,
            corrupt_loc_offset: self.corrupt_loc_offset,
        }
    }
}

/// Settings for `qdelsim rates`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    /// Target rate γ as a decimal ("0.5") or fraction ("1/2") string, so
    /// the arithmetic stays exact.
    pub gamma: String,
    pub t: u64,
    pub e_min: u32,
    pub e_max: u32,
    #[serde(default, alias = "out")]
    pub output_path: Option<PathBuf>,
}

impl RatesConfig {
    pub fn query(&self) -> Result<RateQuery, PipelineError> {
        let gamma = parse_gamma(&self.gamma).ok_or_else(|| {
            PipelineError::Config(format!(
                "gamma \"{}\" is not a decimal or fraction",
                self.gamma
            ))
        })?;
        let query = RateQuery { gamma, t: self.t, e_min: self.e_min, e_max: self.e_max };
        query.validate()?;
        Ok(query)
    }
}

/// Settings for `qdelsim simulate`: one state, one explicit pattern.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub params: CodeParams,
    pub logical_state: LogicalStateSpec,
    /// Deleted positions, 1-based, strictly increasing.
    pub pattern: Vec<usize>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, alias = "seed")]
    pub master_seed: u64,
    #[serde(default, alias = "out")]
    pub output_path: Option<PathBuf>,
}

/// A parsed run configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Verify(VerifyConfig),
    Rates(RatesConfig),
    Simulate(SimulateConfig),
}

impl RunConfig {
    pub fn command_name(&self) -> &'static str {
        match self {
            RunConfig::Verify(_) => "verify",
            RunConfig::Rates(_) => "rates",
            RunConfig::Simulate(_) => "simulate",
        }
    }

    pub fn out(&self) -> Option<&Path> {
        match self {
            RunConfig::Verify(c) => c.output_path.as_deref(),
            RunConfig::Rates(c) => c.output_path.as_deref(),
            RunConfig::Simulate(c) => c.output_path.as_deref(),
        }
    }
}

/// Parses a config from JSON text.
pub fn parse_config(text: &str) -> Result<RunConfig, PipelineError> {
    let mut value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| PipelineError::Config(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| PipelineError::Config("config must be a JSON object".to_string()))?;
    let command = obj
        .remove("command")
        .and_then(|v| v.as_str().map(str::to_string))
        .ok_or_else(|| PipelineError::Config("missing string field \"command\"".to_string()))?;
    let rest = serde_json::Value::Object(obj.clone());
    let bad = |e: serde_json::Error| PipelineError::Config(format!("invalid {command} config: {e}"));
    match command.as_str() {
        "verify" => Ok(RunConfig::Verify(serde_json::from_value(rest).map_err(bad)?)),
        "rates" => Ok(RunConfig::Rates(serde_json::from_value(rest).map_err(bad)?)),
        "simulate" => Ok(RunConfig::Simulate(serde_json::from_value(rest).map_err(bad)?)),
        other => Err(PipelineError::Config(format!(
            "unknown command \"{other}\" (expected verify, rates or simulate)"
        ))),
    }
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const VERIFY: &str = r#"{
        "command": "verify",
        "params": {"extension_degree": 2, "n": 3, "k_c": 2, "k_d": 2, "t": 1},
        "logical_states": [{"kind": "ghz"}, {"kind": "basis", "bits": "01"}],
        "deletion_mode": {"mode": "exhaustive"}
    }"#;

    #[test]
    fn parses_verify() {
        let config = parse_config(VERIFY).unwrap();
        assert_eq!(config.command_name(), "verify");
        let RunConfig::Verify(v) = config else { panic!() };
        assert_eq!(v.params.n, 3);
        assert_eq!(v.tolerance, 1e-9);
        assert_eq!(v.logical_states.len(), 2);
        assert_eq!(v.deletion_mode, DeletionMode::Exhaustive);
        assert!(!v.corrupt_loc_offset);
    }

    #[test]
    fn parses_rates_and_simulate() {
        let config = parse_config(
            r#"{"command": "rates", "gamma": "1/2", "t": 1, "e_min": 2, "e_max": 10}"#,
        )
        .unwrap();
        let RunConfig::Rates(r) = config else { panic!() };
        assert!(r.query().is_ok());

        let config = parse_config(
            r#"{
                "command": "simulate",
                "params": {"extension_degree": 2, "n": 3, "k_c": 2, "k_d": 2, "t": 1},
                "logical_state": {"kind": "maximally_mixed"},
                "pattern": [4, 9],
                "seed": 11
            }"#,
        )
        .unwrap();
        let RunConfig::Simulate(s) = config else { panic!() };
        assert_eq!(s.pattern, vec![4, 9]);
        assert_eq!(s.master_seed, 11);
    }

    #[test]
    fn rejects_unknown_fields_and_commands() {
        assert!(parse_config(r#"{"command": "verify", "bogus": 1}"#).is_err());
        assert!(parse_config(r#"{"command": "anneal"}"#).is_err());
        assert!(parse_config(r#"{"params": {}}"#).is_err());
        assert!(parse_config("not json").is_err());
        let with_typo = VERIFY.replace("logical_states", "logical_sates");
        assert!(parse_config(&with_typo).is_err());
    }

    #[test]
    fn rejects_bad_gamma() {
        let config = parse_config(
            r#"{"command": "rates", "gamma": "fast", "t": 1, "e_min": 2, "e_max": 4}"#,
        )
        .unwrap();
        let RunConfig::Rates(r) = config else { panic!() };
        assert!(r.query().is_err());
    }
}
