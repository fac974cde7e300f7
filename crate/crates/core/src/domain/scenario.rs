use alloc::format;

use crate::domain::component::Experiment;
use crate::domain::reward::RewardConfig;
use crate::error::DomainError;

/// Full parameterization of the discrete training environment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioConfig {
    pub experiment: Experiment,
    /// Episode length cap in timesteps.
    #[cfg_attr(feature = "serde", serde(default = "default_max_timesteps"))]
    pub max_timesteps: u32,
    /// Position the vehicle must reach, in progress units.
    #[cfg_attr(feature = "serde", serde(default = "default_goal_step"))]
    pub goal_step: u32,
    /// Per-timestep probability that the attacker flips one component.
    #[cfg_attr(feature = "serde", serde(default = "default_attack_prob"))]
    pub attack_prob: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub rewards: RewardConfig,
}

fn default_max_timesteps() -> u32 {
    1800
}

fn default_goal_step() -> u32 {
    800
}

fn default_attack_prob() -> f64 {
    0.1
}

impl ScenarioConfig {
    pub fn new(experiment: Experiment) -> Self {
        ScenarioConfig {
            experiment,
            max_timesteps: default_max_timesteps(),
            goal_step: default_goal_step(),
            attack_prob: default_attack_prob(),
            seed: 0,
            rewards: RewardConfig::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if self.max_timesteps == 0 {
            return Err(DomainError::InvalidConfig(
                "max_timesteps must be positive".into(),
            ));
        }
        if self.goal_step == 0 {
            return Err(DomainError::InvalidConfig("goal_step must be positive".into()));
        }
        if self.goal_step > self.max_timesteps {
            return Err(DomainError::InvalidConfig(format!(
                "goal_step ({}) must not exceed max_timesteps ({})",
                self.goal_step, self.max_timesteps
            )));
        }
        if !(0.0..=1.0).contains(&self.attack_prob) {
            return Err(DomainError::InvalidConfig(format!(
                "attack_prob ({}) must lie in [0, 1]",
                self.attack_prob
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_experiment_setup() {
        let cfg = ScenarioConfig::new(Experiment::Exp1);
        assert_eq!(cfg.max_timesteps, 1800);
        assert_eq!(cfg.goal_step, 800);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn goal_past_horizon_rejected() {
        let mut cfg = ScenarioConfig::new(Experiment::Exp1);
        cfg.goal_step = 2000;
        assert!(matches!(cfg.validate(), Err(DomainError::InvalidConfig(_))));
    }

    #[test]
    fn attack_prob_out_of_range_rejected() {
        let mut cfg = ScenarioConfig::new(Experiment::Exp1);
        cfg.attack_prob = 1.5;
        assert!(cfg.validate().is_err());
        cfg.attack_prob = -0.1;
        assert!(cfg.validate().is_err());
    }
}
