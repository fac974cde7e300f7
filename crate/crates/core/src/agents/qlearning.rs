//! Tabular Q-learning with epsilon-greedy exploration.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use crate::agents::select_epsilon_greedy;
use crate::env_simple::SimpleEnv;
use crate::error::DomainError;

/// Dense state/action value table, zero-initialized.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    num_states: usize,
    num_actions: usize,
    values: Vec<f64>,
}

impl QTable {
    pub fn new(num_states: usize, num_actions: usize) -> Self {
        QTable {
            num_states,
            num_actions,
            values: vec![0.0; num_states * num_actions],
        }
    }

    /// Rebuilds a table from row-major values, validating the shape.
    pub fn from_values(
        num_states: usize,
        num_actions: usize,
        values: Vec<f64>,
    ) -> Result<Self, DomainError> {
        if values.len() != num_states * num_actions {
            return Err(DomainError::InvalidConfig(alloc::format!(
                "expected {} Q values ({}x{}), got {}",
                num_states * num_actions,
                num_states,
                num_actions,
                values.len()
            )));
        }
        Ok(QTable {
            num_states,
            num_actions,
            values,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.values[state * self.num_actions..(state + 1) * self.num_actions]
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.num_actions + action]
    }

    pub fn set(&mut self, state: usize, action: usize, value: f64) {
        self.values[state * self.num_actions + action] = value;
    }

    pub fn max_value(&self, state: usize) -> f64 {
        self.row(state).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Row-major values, states outermost.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Q-learning hyperparameters. Alpha/gamma/epsilon defaults are the
/// combination the grid search favoured; epsilon decays linearly per
/// episode from `epsilon_initial` to `epsilon_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct QLearningParams {
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_initial: f64,
    pub epsilon_final: f64,
    pub episodes: u32,
}

impl Default for QLearningParams {
    fn default() -> Self {
        QLearningParams {
            alpha: 0.1,
            gamma: 0.9,
            epsilon_initial: 0.9,
            epsilon_final: 0.05,
            episodes: 1000,
        }
    }
}

impl QLearningParams {
    pub fn validate(&self) -> Result<(), DomainError> {
        // epsilon_initial = 0 is the pure-argmax training strategy.
        let ok = self.alpha > 0.0
            && self.alpha <= 1.0
            && self.gamma > 0.0
            && self.gamma <= 1.0
            && self.epsilon_initial >= 0.0
            && self.epsilon_initial <= 1.0
            && self.epsilon_final >= 0.0
            && self.epsilon_final <= self.epsilon_initial;
        if ok {
            Ok(())
        } else {
            Err(DomainError::InvalidConfig(
                "q-learning parameters out of range".into(),
            ))
        }
    }

    /// Linear per-episode decay; the last episode runs at `epsilon_final`.
    pub fn epsilon_for_episode(&self, episode: u32) -> f64 {
        if self.episodes <= 1 {
            return self.epsilon_final;
        }
        let span = self.epsilon_initial - self.epsilon_final;
        let progress = f64::from(episode) / f64::from(self.episodes - 1);
        self.epsilon_initial - span * progress.min(1.0)
    }
}

/// One temporal-difference backup:
/// `Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') * (1-done) - Q(s,a))`.
pub fn q_update(
    table: &mut QTable,
    state: usize,
    action: usize,
    reward: f64,
    next_state: usize,
    done: bool,
    alpha: f64,
    gamma: f64,
) {
    let bootstrap = if done { 0.0 } else { gamma * table.max_value(next_state) };
    let current = table.get(state, action);
    table.set(state, action, current + alpha * (reward + bootstrap - current));
}

#[derive(Debug, Clone)]
pub struct QTrainResult {
    pub table: QTable,
    /// Total reward of each training episode, in order.
    pub episode_returns: Vec<f64>,
    pub episode_lengths: Vec<u32>,
}

/// Runs `params.episodes` episodes of epsilon-greedy Q-learning in `env`.
///
/// `rng` drives action selection only; the environment keeps its own
/// generator, so a (config, seed, rng) triple fully determines the result.
/// Goal termination stops bootstrapping; running out of time does not,
/// since the timeout is a budget rather than part of the dynamics.
pub fn train_q(
    env: &mut SimpleEnv,
    params: &QLearningParams,
    rng: &mut ChaCha8Rng,
) -> Result<QTrainResult, DomainError> {
    params.validate()?;
    let num_states = env.config().experiment.num_observations();
    let num_actions = env.action_space().len();
    let space = env.action_space().clone();
    let mut table = QTable::new(num_states, num_actions);
    let mut episode_returns = Vec::with_capacity(params.episodes as usize);
    let mut episode_lengths = Vec::with_capacity(params.episodes as usize);

    for episode in 0..params.episodes {
        let epsilon = params.epsilon_for_episode(episode);
        let mut obs = env.reset();
        let mut total = 0.0;
        let mut steps = 0u32;
        loop {
            let action_id = select_epsilon_greedy(table.row(obs.index), epsilon, rng);
            let action = space.get(action_id).expect("id within action space");
            let step = env.step(action)?;
            q_update(
                &mut table,
                obs.index,
                action_id,
                step.reward,
                step.obs.index,
                step.terminated,
                params.alpha,
                params.gamma,
            );
            total += step.reward;
            steps += 1;
            if step.done() {
                break;
            }
            obs = step.obs;
        }
        episode_returns.push(total);
        episode_lengths.push(steps);
    }

    Ok(QTrainResult {
        table,
        episode_returns,
        episode_lengths,
    })
}
