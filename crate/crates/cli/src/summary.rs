use serde::{Deserialize, Serialize};
use ugvrl_core::Experiment;

use crate::model::Algorithm;

/// Evaluation statistics of one run; every field is deterministic given
/// (config, seed).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub experiment: Experiment,
    pub episodes_evaluated: u32,
    pub mean_reward: f64,
    pub mean_timesteps: f64,
    pub seed: u64,
    pub attack_prob: f64,
}

/// Wall-clock figures kept apart from the deterministic summary so output
/// files stay byte-identical across reruns.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TimingMetadata {
    pub training_time_seconds: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryFile {
    pub summary: RunSummary,
    pub metadata: TimingMetadata,
}

impl RunSummary {
    pub fn print(&self, timing: &TimingMetadata) {
        println!("algorithm:          {}", self.algorithm);
        println!("experiment:         {}", self.experiment);
        println!("episodes evaluated: {}", self.episodes_evaluated);
        println!("mean reward:        {:.2}", self.mean_reward);
        println!("mean timesteps:     {:.2}", self.mean_timesteps);
        println!("attack_prob:        {}", self.attack_prob);
        println!("seed:               {}", self.seed);
        if let Some(secs) = timing.training_time_seconds {
            println!("training time:      {secs:.2} s");
        }
    }
}
