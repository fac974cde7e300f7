use alloc::string::String;

/// Errors raised by the domain model and the environments.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    /// An action referenced a component index outside the scenario.
    #[error("component index {index} out of range for {experiment} ({count} components)")]
    ComponentOutOfRange {
        index: usize,
        experiment: &'static str,
        count: usize,
    },

    /// An action verb does not apply to the targeted component kind.
    #[error("action {action} cannot target {component}: {reason}")]
    InvalidActionTarget {
        action: &'static str,
        component: &'static str,
        reason: &'static str,
    },

    /// `step` was called after the episode terminated or was truncated.
    #[error("episode already finished; call reset before stepping again")]
    EpisodeFinished,

    /// A configuration value violates an invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A policy was paired with an environment of a different shape.
    #[error("observation space mismatch: policy expects {policy_states} states, environment has {env_states}")]
    ObservationSpaceMismatch {
        policy_states: usize,
        env_states: usize,
    },

    /// Training produced non-finite or runaway values.
    #[error("numeric failure: {0}")]
    Numeric(String),
}
