//! The three strategies compared in the experiments: a random baseline,
//! tabular Q-learning, and a small from-scratch DQN.

pub mod dqn;
pub mod qlearning;

use alloc::boxed::Box;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{Action, ActionSpace, Observation};
use crate::env_simple::SimpleEnv;
use crate::error::DomainError;

pub use dqn::{dqn_train, DqnParams, DqnTrainResult, Mlp, ReplayBuffer, Transition};
pub use qlearning::{q_update, train_q, QLearningParams, QTable, QTrainResult};

/// Index of the largest value, breaking ties toward the lowest index so
/// greedy behaviour is deterministic.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Uniformly random action id.
pub fn select_random(num_actions: usize, rng: &mut ChaCha8Rng) -> usize {
    rng.random_range(0..num_actions)
}

/// Epsilon-greedy selection over one Q row: explore uniformly with
/// probability `epsilon`, otherwise exploit the argmax.
pub fn select_epsilon_greedy(q_row: &[f64], epsilon: f64, rng: &mut ChaCha8Rng) -> usize {
    if rng.random_bool(epsilon) {
        select_random(q_row.len(), rng)
    } else {
        argmax(q_row)
    }
}

/// A decision rule mapping observations to actions. Stochastic policies own
/// their generator so runs stay reproducible.
pub trait Policy {
    fn select(&mut self, obs: &Observation) -> Action;

    /// Observation-space size the policy was built for, if it has one.
    /// Used to reject transfers onto a mismatched scenario.
    fn num_states(&self) -> Option<usize> {
        None
    }
}

/// Baseline: a uniformly random action every step.
pub struct RandomPolicy {
    space: ActionSpace,
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub fn new(space: ActionSpace, rng: ChaCha8Rng) -> Self {
        RandomPolicy { space, rng }
    }
}

impl Policy for RandomPolicy {
    fn select(&mut self, _obs: &Observation) -> Action {
        self.space
            .get(select_random(self.space.len(), &mut self.rng))
            .expect("action space is never empty")
    }
}

/// Greedy argmax over a learned Q-table.
pub struct GreedyTablePolicy {
    table: QTable,
    space: ActionSpace,
}

impl GreedyTablePolicy {
    pub fn new(table: QTable, space: ActionSpace) -> Self {
        GreedyTablePolicy { table, space }
    }
}

impl Policy for GreedyTablePolicy {
    fn select(&mut self, obs: &Observation) -> Action {
        self.space
            .get(argmax(self.table.row(obs.index)))
            .expect("table row length matches the action space")
    }

    fn num_states(&self) -> Option<usize> {
        Some(self.table.num_states())
    }
}

/// Epsilon-greedy over a learned Q-table (the paper's non-argmax strategy).
pub struct EpsilonGreedyTablePolicy {
    table: QTable,
    space: ActionSpace,
    epsilon: f64,
    rng: ChaCha8Rng,
}

impl EpsilonGreedyTablePolicy {
    pub fn new(table: QTable, space: ActionSpace, epsilon: f64, rng: ChaCha8Rng) -> Self {
        EpsilonGreedyTablePolicy {
            table,
            space,
            epsilon,
            rng,
        }
    }
}

impl Policy for EpsilonGreedyTablePolicy {
    fn select(&mut self, obs: &Observation) -> Action {
        let id = select_epsilon_greedy(self.table.row(obs.index), self.epsilon, &mut self.rng);
        self.space.get(id).expect("row length matches action space")
    }

    fn num_states(&self) -> Option<usize> {
        Some(self.table.num_states())
    }
}

/// Greedy argmax over a trained Q-network.
pub struct GreedyNetPolicy {
    net: Mlp,
    space: ActionSpace,
}

impl GreedyNetPolicy {
    pub fn new(net: Mlp, space: ActionSpace) -> Self {
        GreedyNetPolicy { net, space }
    }
}

impl Policy for GreedyNetPolicy {
    fn select(&mut self, obs: &Observation) -> Action {
        let q = self.net.forward(&dqn::one_hot(obs.index, self.net.input_len()));
        self.space.get(argmax(&q)).expect("net output matches action space")
    }

    fn num_states(&self) -> Option<usize> {
        Some(self.net.input_len())
    }
}

/// One row of the per-step episode log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// 0-based step counter within the episode.
    pub step: u32,
    /// Environment timestep after the step (starts at 1).
    pub timestep: u32,
    pub obs_index: usize,
    pub action_id: usize,
    pub reward: f64,
    pub terminated: bool,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeSummary {
    pub total_reward: f64,
    pub steps: u32,
    pub reached_goal: bool,
}

/// Plays one full episode of `policy` in `env`, reporting each step to
/// `on_step`. Resets the environment first only if the previous episode
/// finished, so callers that reseed keep the schedule they seeded.
pub fn run_episode(
    env: &mut SimpleEnv,
    policy: &mut dyn Policy,
    mut on_step: impl FnMut(&StepRecord),
) -> Result<EpisodeSummary, DomainError> {
    if let Some(states) = policy.num_states() {
        let env_states = env.config().experiment.num_observations();
        if states != env_states {
            return Err(DomainError::ObservationSpaceMismatch {
                policy_states: states,
                env_states,
            });
        }
    }
    if env.is_done() {
        env.reset();
    }
    let space = env.action_space().clone();
    let mut obs = env.observation();
    let mut total_reward = 0.0;
    let mut steps = 0u32;
    loop {
        let obs_index = obs.index;
        let action = policy.select(&obs);
        let action_id = space.id_of(action).ok_or(DomainError::InvalidActionTarget {
            action: action.verb(),
            component: "unknown",
            reason: "action not in the scenario's action space",
        })?;
        let step = env.step(action)?;
        total_reward += step.reward;
        on_step(&StepRecord {
            step: steps,
            timestep: env.t(),
            obs_index,
            action_id,
            reward: step.reward,
            terminated: step.terminated,
            truncated: step.truncated,
        });
        steps += 1;
        if step.done() {
            return Ok(EpisodeSummary {
                total_reward,
                steps,
                reached_goal: step.terminated,
            });
        }
        obs = step.obs;
    }
}

/// Boxes the greedy policy for a trained model, shared by eval and transfer.
pub fn greedy_policy(model: TrainedModel, space: ActionSpace) -> Box<dyn Policy> {
    match model {
        TrainedModel::Table(table) => Box::new(GreedyTablePolicy::new(table, space)),
        TrainedModel::Net(net) => Box::new(GreedyNetPolicy::new(net, space)),
    }
}

/// Either kind of trained value model.
#[derive(Debug, Clone)]
pub enum TrainedModel {
    Table(QTable),
    Net(Mlp),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Experiment, ScenarioConfig};
    use crate::seeded_rng;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn argmax_picks_largest() {
        assert_eq!(argmax(&[0.0, 5.0, 3.0]), 1);
    }

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax(&[2.0, 2.0, 1.0]), 0);
        assert_eq!(argmax(&[0.0, 0.0, 0.0]), 0);
    }

    #[test]
    fn epsilon_zero_is_argmax() {
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            assert_eq!(select_epsilon_greedy(&[0.0, 5.0, 3.0], 0.0, &mut rng), 1);
        }
    }

    #[test]
    fn epsilon_one_is_uniform() {
        let mut rng = seeded_rng(3);
        let mut counts = [0u32; 3];
        for _ in 0..30_000 {
            counts[select_epsilon_greedy(&[0.0, 5.0, 3.0], 1.0, &mut rng)] += 1;
        }
        for c in counts {
            let f = f64::from(c) / 30_000.0;
            assert!((f - 1.0 / 3.0).abs() < 0.02, "frequency {f}");
        }
    }

    #[test]
    fn random_selection_frequencies_within_bounds() {
        let mut rng = seeded_rng(11);
        let mut counts = [0u32; 7];
        for _ in 0..70_000 {
            counts[select_random(7, &mut rng)] += 1;
        }
        for c in counts {
            let f = f64::from(c) / 70_000.0;
            assert!((0.13..=0.155).contains(&f), "frequency {f}");
        }
    }

    #[test]
    fn single_action_space_always_selected() {
        let mut rng = seeded_rng(0);
        for _ in 0..10 {
            assert_eq!(select_random(1, &mut rng), 0);
        }
    }

    #[test]
    fn fixed_seed_reproduces_selection_sequence() {
        let draw = || {
            let mut rng = seeded_rng(9);
            (0..50).map(|_| select_random(7, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn episode_return_equals_sum_of_step_rewards() {
        let mut cfg = ScenarioConfig::new(Experiment::Exp1).with_seed(4);
        cfg.attack_prob = 0.4;
        cfg.goal_step = 30;
        cfg.max_timesteps = 60;
        let mut env = SimpleEnv::new(cfg).unwrap();
        let mut policy = RandomPolicy::new(env.action_space().clone(), seeded_rng(8));
        let mut rewards = vec![];
        let summary = run_episode(&mut env, &mut policy, |rec| rewards.push(rec.reward)).unwrap();
        assert_eq!(summary.total_reward, rewards.iter().sum::<f64>());
        assert_eq!(summary.steps as usize, rewards.len());
    }

    #[test]
    fn mismatched_policy_is_rejected() {
        let cfg = ScenarioConfig::new(Experiment::Exp2);
        let mut env = SimpleEnv::new(cfg).unwrap();
        let table = QTable::new(24, 7);
        let mut policy = GreedyTablePolicy::new(table, ActionSpace::new(Experiment::Exp1));
        let err = run_episode(&mut env, &mut policy, |_| {}).unwrap_err();
        assert!(matches!(err, DomainError::ObservationSpaceMismatch { .. }));
    }
}
