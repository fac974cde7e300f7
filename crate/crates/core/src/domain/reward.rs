use crate::domain::action::Action;
use crate::domain::component::VehicleState;

/// The per-step reward schedule, in dimensionless reward units.
///
/// Driving earns a base reward, with a bonus for staying idle and a stiff
/// penalty for intervening while healthy. Standing still costs, doubly so
/// when the agent idles instead of repairing. Reaching the goal and running
/// out of time add terminal bonuses/penalties.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct RewardConfig {
    pub driving_base: f64,
    pub driving_donothing_bonus: f64,
    pub driving_wrong_action: f64,
    pub stationary_base: f64,
    pub stationary_donothing_extra: f64,
    pub goal_bonus: f64,
    pub timeout_penalty: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            driving_base: 1.0,
            driving_donothing_bonus: 1.0,
            driving_wrong_action: -10.0,
            stationary_base: -1.0,
            stationary_donothing_extra: -1.0,
            goal_bonus: 50.0,
            timeout_penalty: -10.0,
        }
    }
}

/// How a step ended, if it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    None,
    /// The goal position was reached this step.
    Goal,
    /// The timestep budget ran out this step.
    Timeout,
}

/// Total reward for one step: the state/action term plus any terminal term.
///
/// The vehicle state is the one derived after the action was applied. A
/// goal-reaching step is a driving step that crossed the threshold, so
/// `GoalReached` uses the driving term.
pub fn step_reward(
    vehicle_after_action: VehicleState,
    action: Action,
    terminal: Terminal,
    cfg: &RewardConfig,
) -> f64 {
    let idle = action == Action::DoNothing;
    let state_term = match vehicle_after_action {
        VehicleState::Driving | VehicleState::GoalReached => {
            cfg.driving_base
                + if idle {
                    cfg.driving_donothing_bonus
                } else {
                    cfg.driving_wrong_action
                }
        }
        VehicleState::Stationary => {
            cfg.stationary_base
                + if idle {
                    cfg.stationary_donothing_extra
                } else {
                    0.0
                }
        }
    };
    let terminal_term = match terminal {
        Terminal::None => 0.0,
        Terminal::Goal => cfg.goal_bonus,
        Terminal::Timeout => cfg.timeout_penalty,
    };
    state_term + terminal_term
}
