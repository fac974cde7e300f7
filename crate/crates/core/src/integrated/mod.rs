//! Clock-driven environment for sim-to-sim policy transfer: component and
//! control messages travel over an in-process topic bus, a kinematic
//! vehicle follows its route, and a timer-based injector fires attacks at
//! random intervals.
//!
//! One deterministic scheduler drives the control loop, the injector, and
//! the vehicle, so a mission is fully reproducible from its scenario. The
//! [`MissionClock`] only paces wall time (real-time or accelerated) and
//! cannot change outcomes.

mod bus;
mod vehicle;

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use bus::{BusMessage, ControlCommand, ControlMessage, Subscription, TopicBus};
pub use vehicle::{DriveMode, InstantClock, MissionClock, VehicleSim};

use crate::agents::Policy;
use crate::domain::{
    step_reward, Action, ActionSpace, ComponentStateVector, Experiment, Observation, RewardConfig,
    Terminal, VehicleState,
};
use crate::error::DomainError;
use crate::seeded_rng;

/// Topic carrying vehicle control commands.
pub const CONTROL_TOPIC: &str = "control";

/// Topic carrying a component's state messages (named after the component).
pub fn component_topic(experiment: Experiment, component: usize) -> &'static str {
    experiment.components()[component].name
}

/// Parameters of one integrated mission.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegratedScenario {
    pub experiment: Experiment,
    /// Mission time limit, seconds.
    pub max_time: f64,
    /// Route length, meters.
    pub route_length: f64,
    /// Driving speed, meters/second.
    pub speed: f64,
    /// Attack inter-arrival bounds, seconds.
    pub min_attack_bound: f64,
    pub max_attack_bound: f64,
    /// Wall-clock acceleration factor (>= 1); 1 is real time.
    #[cfg_attr(feature = "serde", serde(default = "default_clock_scale"))]
    pub clock_scale: f64,
    /// Agent polling period, simulated seconds.
    #[cfg_attr(feature = "serde", serde(default = "default_control_period"))]
    pub control_period: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub rewards: RewardConfig,
}

fn default_clock_scale() -> f64 {
    50.0
}

fn default_control_period() -> f64 {
    0.1
}

impl IntegratedScenario {
    pub fn new(experiment: Experiment) -> Self {
        IntegratedScenario {
            experiment,
            max_time: 120.0,
            route_length: 100.0,
            speed: 2.0,
            min_attack_bound: 5.0,
            max_attack_bound: 10.0,
            clock_scale: default_clock_scale(),
            control_period: default_control_period(),
            seed: 0,
            rewards: RewardConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if !(self.max_time > 0.0 && self.route_length > 0.0 && self.speed > 0.0) {
            return Err(DomainError::InvalidConfig(
                "max_time, route_length and speed must be positive".into(),
            ));
        }
        if !(self.min_attack_bound > 0.0 && self.min_attack_bound <= self.max_attack_bound) {
            return Err(DomainError::InvalidConfig(format!(
                "attack bounds must satisfy 0 < min ({}) <= max ({})",
                self.min_attack_bound, self.max_attack_bound
            )));
        }
        if self.max_attack_bound >= self.max_time {
            return Err(DomainError::InvalidConfig(format!(
                "max_attack_bound ({}) must be below max_time ({})",
                self.max_attack_bound, self.max_time
            )));
        }
        if self.clock_scale < 1.0 {
            return Err(DomainError::InvalidConfig(
                "clock_scale must be at least 1".into(),
            ));
        }
        if self.control_period <= 0.0 {
            return Err(DomainError::InvalidConfig(
                "control_period must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Next attack time: `now` plus a uniform draw from the bound interval.
pub fn schedule_next_attack(
    now: f64,
    min_bound: f64,
    max_bound: f64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    now + rng.random_range(min_bound..=max_bound)
}

/// Flips a uniformly random component and publishes its new state on that
/// component's topic. Returns the component index.
pub fn inject_attack(
    bus: &mut TopicBus,
    components: &mut ComponentStateVector,
    experiment: Experiment,
    rng: &mut ChaCha8Rng,
) -> usize {
    let component = rng.random_range(0..experiment.num_components());
    components.toggle(component);
    bus.publish(
        component_topic(experiment, component),
        BusMessage::ComponentState {
            component,
            state: components.get(component).expect("index in range"),
        },
    );
    component
}

/// Applies an agent action to the component model and tells the vehicle
/// what that implies: follow the trajectory if every component is nominal
/// again, stop otherwise. Do-nothing sends no messages at all.
///
/// The healthy force brake is OFF, so "turn on Force Brake" ends in a stop
/// command while "turn on Generator" (restoring it) ends in follow.
pub fn bridge_action(
    action: Action,
    components: &mut ComponentStateVector,
    experiment: Experiment,
    bus: &mut TopicBus,
    now: f64,
) -> Result<(), DomainError> {
    action.apply(components, experiment)?;
    if let Some(component) = action.target() {
        bus.publish(
            component_topic(experiment, component),
            BusMessage::ComponentState {
                component,
                state: components.get(component).expect("index in range"),
            },
        );
        publish_drive_state(bus, components, experiment, now);
    }
    Ok(())
}

/// Publishes the control command implied by current component health.
fn publish_drive_state(
    bus: &mut TopicBus,
    components: &ComponentStateVector,
    experiment: Experiment,
    now: f64,
) {
    let command = if components.is_nominal(experiment) {
        ControlCommand::FollowTrajectory
    } else {
        ControlCommand::Stop
    };
    bus.publish(
        CONTROL_TOPIC,
        BusMessage::Control(ControlMessage {
            command,
            timestamp: now,
        }),
    );
}

/// One line of the mission transcript.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MissionEvent {
    pub timestamp: f64,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: MissionEventKind,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "event_type", content = "payload", rename_all = "snake_case")
)]
pub enum MissionEventKind {
    Attack { component: usize },
    Action { action_id: usize },
    Control { command: ControlCommand },
    Tick { distance_remaining: f64 },
    Terminal { success: bool },
}

/// Outcome of one integrated mission.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MissionResult {
    /// The route was completed before the time limit.
    pub success: bool,
    /// Simulated seconds until termination.
    pub elapsed: f64,
    pub attacks_injected: u32,
    /// Non-idle actions the agent issued.
    pub responses: u32,
    /// Reward accumulated per control period with the shared schedule, for
    /// comparability with the training environment.
    pub total_reward: f64,
}

/// Runs one mission: every control period the agent's view is rebuilt from
/// the component topics, the policy acts through the bridge, the vehicle
/// consumes control messages and moves, and any due attack fires afterwards.
///
/// Attacks also publish the stop/follow command implied by component
/// health, mirroring how a compromised component halts the real vehicle
/// until the agent restores it.
pub fn run_mission(
    policy: &mut dyn Policy,
    scenario: &IntegratedScenario,
    clock: &mut dyn MissionClock,
    mut on_event: impl FnMut(&MissionEvent),
) -> Result<MissionResult, DomainError> {
    scenario.validate()?;
    let experiment = scenario.experiment;
    if let Some(states) = policy.num_states() {
        if states != experiment.num_observations() {
            return Err(DomainError::ObservationSpaceMismatch {
                policy_states: states,
                env_states: experiment.num_observations(),
            });
        }
    }

    let mut rng = seeded_rng(scenario.seed);
    let space = ActionSpace::new(experiment);
    let mut bus = TopicBus::new();
    let mut truth = experiment.nominal_vector();
    let mut agent_view = experiment.nominal_vector();
    let mut component_subs: Vec<Subscription> = (0..experiment.num_components())
        .map(|i| bus.subscribe(component_topic(experiment, i)))
        .collect();
    let mut vehicle_sub = bus.subscribe(CONTROL_TOPIC);
    let mut logger_sub = bus.subscribe(CONTROL_TOPIC);
    let mut vehicle = VehicleSim::new(scenario.route_length, scenario.speed);

    let dt = scenario.control_period;
    let mut now = 0.0_f64;
    let mut next_attack =
        schedule_next_attack(0.0, scenario.min_attack_bound, scenario.max_attack_bound, &mut rng);
    let mut attacks_injected = 0u32;
    let mut responses = 0u32;
    let mut total_reward = 0.0;

    loop {
        for sub in component_subs.iter_mut() {
            for msg in bus.poll(sub) {
                if let BusMessage::ComponentState { component, state } = msg {
                    agent_view.set(*component, *state);
                }
            }
        }
        let vehicle_obs = match vehicle.mode {
            DriveMode::Following => VehicleState::Driving,
            DriveMode::Stopped => VehicleState::Stationary,
        };
        let obs = Observation::new(agent_view.clone(), vehicle_obs);
        let action = policy.select(&obs);
        let action_id = space.id_of(action).ok_or(DomainError::InvalidActionTarget {
            action: action.verb(),
            component: "unknown",
            reason: "action not in the scenario's action space",
        })?;
        on_event(&MissionEvent {
            timestamp: now,
            kind: MissionEventKind::Action { action_id },
        });
        if action != Action::DoNothing {
            responses += 1;
        }
        bridge_action(action, &mut truth, experiment, &mut bus, now)?;
        for msg in bus.poll(&mut logger_sub) {
            if let BusMessage::Control(control) = msg {
                on_event(&MissionEvent {
                    timestamp: control.timestamp,
                    kind: MissionEventKind::Control {
                        command: control.command,
                    },
                });
            }
        }

        for msg in bus.poll(&mut vehicle_sub) {
            if let BusMessage::Control(control) = msg {
                vehicle.apply_control(control.command);
            }
        }
        vehicle.tick(dt);
        clock.wait(dt);
        now += dt;
        on_event(&MissionEvent {
            timestamp: now,
            kind: MissionEventKind::Tick {
                distance_remaining: vehicle.distance_remaining,
            },
        });

        let arrived = vehicle.arrived();
        let out_of_time = !arrived && now >= scenario.max_time - 1e-9;
        let vehicle_after = if arrived {
            VehicleState::GoalReached
        } else {
            match vehicle.mode {
                DriveMode::Following => VehicleState::Driving,
                DriveMode::Stopped => VehicleState::Stationary,
            }
        };
        let terminal = if arrived {
            Terminal::Goal
        } else if out_of_time {
            Terminal::Timeout
        } else {
            Terminal::None
        };
        total_reward += step_reward(vehicle_after, action, terminal, &scenario.rewards);

        if arrived || out_of_time {
            on_event(&MissionEvent {
                timestamp: now,
                kind: MissionEventKind::Terminal { success: arrived },
            });
            return Ok(MissionResult {
                success: arrived,
                elapsed: now,
                attacks_injected,
                responses,
                total_reward,
            });
        }

        while next_attack <= now {
            let component = inject_attack(&mut bus, &mut truth, experiment, &mut rng);
            attacks_injected += 1;
            on_event(&MissionEvent {
                timestamp: next_attack,
                kind: MissionEventKind::Attack { component },
            });
            // A compromised component halts the vehicle until restored;
            // an attack that happens to restore health lets it resume.
            publish_drive_state(&mut bus, &truth, experiment, next_attack);
            for msg in bus.poll(&mut logger_sub) {
                if let BusMessage::Control(control) = msg {
                    on_event(&MissionEvent {
                        timestamp: control.timestamp,
                        kind: MissionEventKind::Control {
                            command: control.command,
                        },
                    });
                }
            }
            next_attack = schedule_next_attack(
                next_attack,
                scenario.min_attack_bound,
                scenario.max_attack_bound,
                &mut rng,
            );
        }
    }
}
