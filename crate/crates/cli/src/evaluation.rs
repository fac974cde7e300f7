//! Greedy/stochastic policy evaluation over seeded episodes, shared by the
//! eval, train, and compare commands.

use std::io::Write;

use ugvrl_core::agents::{run_episode, Policy};
use ugvrl_core::SimpleEnv;

use crate::episode_log::EpisodeLogWriter;
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub episode_returns: Vec<f64>,
    pub episode_lengths: Vec<u32>,
    pub reached_goal: Vec<bool>,
}

impl EvalOutcome {
    pub fn mean_reward(&self) -> f64 {
        mean(&self.episode_returns)
    }

    pub fn mean_timesteps(&self) -> f64 {
        mean(&self.episode_lengths.iter().map(|l| f64::from(*l)).collect::<Vec<_>>())
    }

    pub fn goal_rate(&self) -> f64 {
        if self.reached_goal.is_empty() {
            return 0.0;
        }
        self.reached_goal.iter().filter(|g| **g).count() as f64 / self.reached_goal.len() as f64
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Runs `episodes` evaluation episodes. Episode `i` reseeds the
/// environment onto stream `i + 1` of `seed`, so results do not depend on
/// evaluation order.
pub fn evaluate_policy<W: Write>(
    env: &mut SimpleEnv,
    policy: &mut dyn Policy,
    episodes: u32,
    seed: u64,
    mut log: Option<&mut EpisodeLogWriter<W>>,
) -> Result<EvalOutcome, CliError> {
    let mut outcome = EvalOutcome {
        episode_returns: Vec::with_capacity(episodes as usize),
        episode_lengths: Vec::with_capacity(episodes as usize),
        reached_goal: Vec::with_capacity(episodes as usize),
    };
    for episode in 0..episodes {
        env.reseed_stream(seed, u64::from(episode) + 1);
        let mut log_error = None;
        let summary = run_episode(env, policy, |rec| {
            if let Some(writer) = log.as_deref_mut() {
                if log_error.is_none() {
                    if let Err(e) = writer.record(episode, rec) {
                        log_error = Some(e);
                    }
                }
            }
        })?;
        if let Some(e) = log_error {
            return Err(e);
        }
        outcome.episode_returns.push(summary.total_reward);
        outcome.episode_lengths.push(summary.steps);
        outcome.reached_goal.push(summary.reached_goal);
    }
    Ok(outcome)
}
