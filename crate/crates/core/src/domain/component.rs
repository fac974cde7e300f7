use alloc::vec::Vec;

use crate::error::DomainError;

/// Binary state of a cyber component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "UPPERCASE"))]
pub enum ComponentState {
    Off,
    On,
}

impl ComponentState {
    pub fn toggled(self) -> ComponentState {
        match self {
            ComponentState::Off => ComponentState::On,
            ComponentState::On => ComponentState::Off,
        }
    }

    /// 1 for ON, 0 for OFF; the bit used by the observation encoding.
    pub fn bit(self) -> usize {
        match self {
            ComponentState::Off => 0,
            ComponentState::On => 1,
        }
    }
}

/// How an agent can act on a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    /// Switched with turn-on / turn-off actions.
    Toggleable,
    /// A data source; restored by republishing correct data (= ON).
    Publishable,
}

/// One cyber component of the vehicle and its healthy state.
///
/// A component whose state differs from `nominal` is compromised. The force
/// brake is nominally OFF (engaging it halts the vehicle); everything else
/// is nominally ON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentSpec {
    pub name: &'static str,
    pub kind: ComponentKind,
    pub nominal: ComponentState,
}

const EXP1_COMPONENTS: [ComponentSpec; 3] = [
    ComponentSpec {
        name: "Force Brake",
        kind: ComponentKind::Toggleable,
        nominal: ComponentState::Off,
    },
    ComponentSpec {
        name: "Generator",
        kind: ComponentKind::Toggleable,
        nominal: ComponentState::On,
    },
    ComponentSpec {
        name: "High-voltage system",
        kind: ComponentKind::Toggleable,
        nominal: ComponentState::On,
    },
];

const EXP2_COMPONENTS: [ComponentSpec; 6] = [
    EXP1_COMPONENTS[0],
    EXP1_COMPONENTS[1],
    EXP1_COMPONENTS[2],
    ComponentSpec {
        name: "Heading",
        kind: ComponentKind::Publishable,
        nominal: ComponentState::On,
    },
    ComponentSpec {
        name: "Noise",
        kind: ComponentKind::Publishable,
        nominal: ComponentState::On,
    },
    ComponentSpec {
        name: "Trajectory",
        kind: ComponentKind::Publishable,
        nominal: ComponentState::On,
    },
];

/// Which component set the scenario uses.
///
/// Experiment 1 is the three toggleable components; experiment 2 adds the
/// three publishable data sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Experiment {
    Exp1,
    Exp2,
}

impl Experiment {
    pub fn components(self) -> &'static [ComponentSpec] {
        match self {
            Experiment::Exp1 => &EXP1_COMPONENTS,
            Experiment::Exp2 => &EXP2_COMPONENTS,
        }
    }

    pub fn num_components(self) -> usize {
        self.components().len()
    }

    /// Size of the discrete observation space: 3 vehicle states times one
    /// bit per component.
    pub fn num_observations(self) -> usize {
        3 * (1 << self.num_components())
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Exp1 => "exp1",
            Experiment::Exp2 => "exp2",
        }
    }

    /// The all-nominal component vector.
    pub fn nominal_vector(self) -> ComponentStateVector {
        ComponentStateVector::new(self.components().iter().map(|c| c.nominal).collect())
    }

    pub(crate) fn check_component_index(self, index: usize) -> Result<(), DomainError> {
        if index < self.num_components() {
            Ok(())
        } else {
            Err(DomainError::ComponentOutOfRange {
                index,
                experiment: self.name(),
                count: self.num_components(),
            })
        }
    }
}

impl core::fmt::Display for Experiment {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// The ON/OFF states of every component, in scenario order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentStateVector {
    states: Vec<ComponentState>,
}

impl ComponentStateVector {
    pub fn new(states: Vec<ComponentState>) -> Self {
        ComponentStateVector { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<ComponentState> {
        self.states.get(index).copied()
    }

    pub fn set(&mut self, index: usize, state: ComponentState) {
        self.states[index] = state;
    }

    pub fn toggle(&mut self, index: usize) {
        self.states[index] = self.states[index].toggled();
    }

    pub fn states(&self) -> &[ComponentState] {
        &self.states
    }

    /// True iff every component equals its healthy state.
    pub fn is_nominal(&self, experiment: Experiment) -> bool {
        debug_assert_eq!(self.states.len(), experiment.num_components());
        self.states
            .iter()
            .zip(experiment.components())
            .all(|(state, spec)| *state == spec.nominal)
    }

    /// The component bits packed little-endian: bit i set iff component i is ON.
    pub fn bits(&self) -> usize {
        self.states
            .iter()
            .enumerate()
            .fold(0, |acc, (i, s)| acc | (s.bit() << i))
    }

    /// Inverse of [`bits`](Self::bits) for a given component count.
    pub fn from_bits(bits: usize, len: usize) -> Self {
        let states = (0..len)
            .map(|i| {
                if bits >> i & 1 == 1 {
                    ComponentState::On
                } else {
                    ComponentState::Off
                }
            })
            .collect();
        ComponentStateVector { states }
    }
}

/// Mission-level state of the vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VehicleState {
    Stationary,
    Driving,
    GoalReached,
}

impl VehicleState {
    /// Index used by the observation encoding.
    pub fn index(self) -> usize {
        match self {
            VehicleState::Stationary => 0,
            VehicleState::Driving => 1,
            VehicleState::GoalReached => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<VehicleState> {
        match index {
            0 => Some(VehicleState::Stationary),
            1 => Some(VehicleState::Driving),
            2 => Some(VehicleState::GoalReached),
            _ => None,
        }
    }
}

/// Rule tying vehicle motion to component health.
///
/// `GoalReached` is absorbing and entered as soon as `position` reaches
/// `goal_step`. Otherwise the vehicle drives exactly when every component is
/// nominal; any compromised component halts it.
pub fn derive_vehicle_state(
    components: &ComponentStateVector,
    experiment: Experiment,
    position: u32,
    goal_step: u32,
    prev: VehicleState,
) -> VehicleState {
    if prev == VehicleState::GoalReached || position >= goal_step {
        VehicleState::GoalReached
    } else if components.is_nominal(experiment) {
        VehicleState::Driving
    } else {
        VehicleState::Stationary
    }
}
