//! Shared domain model: components, vehicle state, actions, observation
//! encoding, and the reward schedule. Both environments and all agents are
//! built on these types.

mod action;
mod component;
mod observation;
mod reward;
mod scenario;

pub use action::{Action, ActionSpace};
pub use component::{
    derive_vehicle_state, ComponentKind, ComponentSpec, ComponentState, ComponentStateVector,
    Experiment, VehicleState,
};
pub use observation::Observation;
pub use reward::{step_reward, RewardConfig, Terminal};
pub use scenario::ScenarioConfig;
