//! Simulation environments and reinforcement-learning agents for autonomous
//! cyber-incident response on a simulated unmanned ground vehicle.
//!
//! The vehicle is abstracted as a set of binary cyber components (generator,
//! high-voltage system, force brake, and optionally three data publishers).
//! An attacker flips component states at random; an agent must issue the
//! restoring action so the vehicle keeps driving toward its goal.
//!
//! Two environments share one domain model:
//!
//! * [`env_simple::SimpleEnv`] — a fast, discrete, seed-deterministic
//!   environment used for all training.
//! * [`integrated`] — a clock-driven environment with an in-process
//!   publish/subscribe topic bus and a kinematic vehicle, used to evaluate
//!   trained policies under more realistic message-passing semantics.
//!
//! Agents: a random baseline, tabular Q-learning, and a small from-scratch
//! DQN (replay buffer, target network, manual backpropagation).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature is
//! enabled by default. File formats, config loading, and the CLI live in the
//! companion `ugvrl-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod agents;
pub mod domain;
pub mod env_simple;
mod error;
pub mod integrated;
pub mod oracle;

pub use domain::{
    derive_vehicle_state, step_reward, Action, ActionSpace, ComponentKind, ComponentSpec,
    ComponentState, ComponentStateVector, Experiment, Observation, RewardConfig, ScenarioConfig,
    Terminal, VehicleState,
};
pub use env_simple::{make_attack_list, AttackSchedule, SimpleEnv, Step};
pub use error::DomainError;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Builds the deterministic generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Builds an independent generator for worker `stream` of a root `seed`.
///
/// Streams of one seed never overlap, so per-episode or per-mission results
/// are reproducible regardless of execution order.
pub fn seeded_stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
