//! Versioned model files: a self-describing JSON document whose payload is
//! deterministic for a given (config, seed); wall-clock figures are
//! confined to the metadata section.

use std::path::Path;

use serde::{Deserialize, Serialize};
use ugvrl_core::agents::{Mlp, QTable, TrainedModel};
use ugvrl_core::{ActionSpace, Experiment};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Random,
    QLearning,
    Dqn,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Random => "random",
            Algorithm::QLearning => "q-learning",
            Algorithm::Dqn => "dqn",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelPayload {
    QTable {
        num_states: usize,
        num_actions: usize,
        /// Row-major, states outermost.
        values: Vec<f64>,
    },
    Mlp {
        layer_sizes: Vec<usize>,
        /// Flattened layer by layer, weights before biases.
        params: Vec<f64>,
    },
}

/// Run facts that may differ between byte-identical trainings.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub seed: u64,
    pub attack_prob: f64,
    pub training_time_seconds: f64,
    #[serde(default)]
    pub trained_episodes: u64,
    #[serde(default)]
    pub trained_timesteps: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub experiment: Experiment,
    pub algorithm: Algorithm,
    pub payload: ModelPayload,
    pub metadata: ModelMetadata,
}

impl ModelFile {
    /// The payload serialized on its own; two trainings with the same
    /// config and seed must produce identical bytes here.
    pub fn payload_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(&self.payload).expect("payload serializes")
    }

    /// Validates the payload shape against the experiment and rebuilds the
    /// trained model.
    pub fn to_trained_model(&self) -> Result<TrainedModel, CliError> {
        let num_states = self.experiment.num_observations();
        let num_actions = ActionSpace::new(self.experiment).len();
        match &self.payload {
            ModelPayload::QTable {
                num_states: s,
                num_actions: a,
                values,
            } => {
                if *s != num_states || *a != num_actions {
                    return Err(CliError::Config(format!(
                        "q-table shape {s}x{a} does not match {} ({}x{})",
                        self.experiment, num_states, num_actions
                    )));
                }
                let table = QTable::from_values(*s, *a, values.clone())?;
                Ok(TrainedModel::Table(table))
            }
            ModelPayload::Mlp { layer_sizes, params } => {
                if layer_sizes.first() != Some(&num_states)
                    || layer_sizes.last() != Some(&num_actions)
                {
                    return Err(CliError::Config(format!(
                        "network shape {layer_sizes:?} does not match {} ({} states, {} actions)",
                        self.experiment, num_states, num_actions
                    )));
                }
                let net = Mlp::from_flat(layer_sizes, params)?;
                if !net.all_finite() {
                    return Err(CliError::Config("model weights are not finite".into()));
                }
                Ok(TrainedModel::Net(net))
            }
        }
    }
}

pub fn save_model(path: &Path, model: &ModelFile) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(model)
        .map_err(|e| CliError::Runtime(anyhow::Error::new(e)))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let model: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if model.format_version != FORMAT_VERSION {
        return Err(CliError::Config(format!(
            "{}: unsupported format_version {} (expected {})",
            path.display(),
            model.format_version,
            FORMAT_VERSION
        )));
    }
    // Shape problems surface on load, not at first use.
    model.to_trained_model()?;
    Ok(model)
}
