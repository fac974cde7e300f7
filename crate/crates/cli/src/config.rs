//! TOML config files. Scenario keys sit at the top level and match the
//! domain field names; agent hyperparameters live in optional
//! `[q_learning]` and `[dqn]` tables.

use std::path::Path;

use serde::Deserialize;
use ugvrl_core::agents::{DqnParams, QLearningParams};
use ugvrl_core::integrated::IntegratedScenario;
use ugvrl_core::ScenarioConfig;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
pub struct SimpleConfigFile {
    #[serde(flatten)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub q_learning: QLearningParams,
    #[serde(default)]
    pub dqn: DqnParams,
}

const SIMPLE_KEYS: &[&str] = &[
    "experiment",
    "max_timesteps",
    "goal_step",
    "attack_prob",
    "seed",
    "rewards",
    "q_learning",
    "dqn",
];

const INTEGRATED_KEYS: &[&str] = &[
    "experiment",
    "max_time",
    "route_length",
    "speed",
    "min_attack_bound",
    "max_attack_bound",
    "clock_scale",
    "control_period",
    "seed",
    "rewards",
];

pub fn load_simple_config(path: &Path) -> Result<SimpleConfigFile, CliError> {
    let text = read(path)?;
    reject_unknown_keys(&text, SIMPLE_KEYS, path)?;
    let file: SimpleConfigFile = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    file.scenario.validate()?;
    Ok(file)
}

pub fn load_integrated_config(path: &Path) -> Result<IntegratedScenario, CliError> {
    let text = read(path)?;
    reject_unknown_keys(&text, INTEGRATED_KEYS, path)?;
    let scenario: IntegratedScenario = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    scenario.validate()?;
    Ok(scenario)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

/// Serde's `flatten` swallows unknown keys; typos in config files should
/// fail loudly instead.
fn reject_unknown_keys(text: &str, known: &[&str], path: &Path) -> Result<(), CliError> {
    let table: toml::Table = toml::from_str(text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    for key in table.keys() {
        if !known.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "{}: unknown key `{key}` (expected one of: {})",
                path.display(),
                known.join(", ")
            )));
        }
    }
    Ok(())
}
