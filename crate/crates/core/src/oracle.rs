//! Independent backward-induction oracle for shrunken scenarios with a
//! pinned attack schedule.
//!
//! Exists purely to verify the learners and the environment: it reimplements
//! the step semantics over the full underlying state (timestep, position,
//! component bits) without touching [`SimpleEnv`](crate::SimpleEnv), and
//! maximizes over all time-aware policies — strictly more information than
//! an agent observing only (component bits, vehicle state) gets.

use alloc::vec;

use crate::domain::{Action, ActionSpace, Experiment, RewardConfig, Terminal, VehicleState};
use crate::env_simple::AttackSchedule;
use crate::step_reward;

/// Applies an action to a component bit mask (bit i set = component i ON).
fn apply_action_bits(bits: usize, action: Action) -> usize {
    match action {
        Action::DoNothing => bits,
        Action::TurnOn(i) | Action::PublishCorrect(i) => bits | (1 << i),
        Action::TurnOff(i) => bits & !(1 << i),
    }
}

/// Optimal total return from the initial (t=0, position=0, all-nominal)
/// state, over every policy that may condition on the full state.
///
/// Transition order mirrors the environment contract: action, vehicle
/// state, motion, terminal checks, then the scheduled attack at the new
/// timestep.
pub fn optimal_return(
    experiment: Experiment,
    max_timesteps: u32,
    goal_step: u32,
    schedule: &AttackSchedule,
    rewards: &RewardConfig,
) -> f64 {
    let space = ActionSpace::new(experiment);
    let k = experiment.num_components();
    let nominal_bits = experiment.nominal_vector().bits();
    let num_bits = 1usize << k;

    let t_len = (max_timesteps + 1) as usize;
    let pos_len = (goal_step + 1) as usize;
    let index = |t: usize, pos: usize, bits: usize| (t * pos_len + pos) * num_bits + bits;
    // Value of (t, pos, bits) given the episode is still running there.
    let mut value = vec![f64::NEG_INFINITY; t_len * pos_len * num_bits];

    for t in (0..max_timesteps).rev() {
        for pos in 0..goal_step {
            for bits in 0..num_bits {
                let mut best = f64::NEG_INFINITY;
                for action in space.iter() {
                    let after = apply_action_bits(bits, action);
                    let driving = after == nominal_bits;
                    let new_pos = pos + u32::from(driving);
                    let terminated = new_pos >= goal_step;
                    let new_t = t + 1;
                    let truncated = !terminated && new_t >= max_timesteps;

                    let vehicle = if terminated {
                        VehicleState::GoalReached
                    } else if driving {
                        VehicleState::Driving
                    } else {
                        VehicleState::Stationary
                    };
                    let terminal = if terminated {
                        Terminal::Goal
                    } else if truncated {
                        Terminal::Timeout
                    } else {
                        Terminal::None
                    };
                    let reward = step_reward(vehicle, action, terminal, rewards);

                    let total = if terminated || truncated {
                        reward
                    } else {
                        let after_attack = match schedule.get(new_t) {
                            Some(component) => after ^ (1 << component),
                            None => after,
                        };
                        reward + value[index(new_t as usize, new_pos as usize, after_attack)]
                    };
                    if total > best {
                        best = total;
                    }
                }
                value[index(t as usize, pos as usize, bits)] = best;
            }
        }
    }

    value[index(0, 0, nominal_bits)]
}
