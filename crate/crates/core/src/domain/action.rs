use alloc::vec::Vec;

use crate::domain::component::{
    ComponentKind, ComponentState, ComponentStateVector, Experiment,
};
use crate::error::DomainError;

/// One agent action. Turn-on/turn-off target a specific toggleable
/// component; publish-correct targets a specific publishable one.
///
/// The action list is expanded per component so the agent can restore
/// exactly the component that was attacked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Action {
    DoNothing,
    TurnOn(usize),
    TurnOff(usize),
    PublishCorrect(usize),
}

impl Action {
    pub fn verb(self) -> &'static str {
        match self {
            Action::DoNothing => "do_nothing",
            Action::TurnOn(_) => "turn_on",
            Action::TurnOff(_) => "turn_off",
            Action::PublishCorrect(_) => "publish_correct",
        }
    }

    pub fn target(self) -> Option<usize> {
        match self {
            Action::DoNothing => None,
            Action::TurnOn(i) | Action::TurnOff(i) | Action::PublishCorrect(i) => Some(i),
        }
    }

    /// Checks the action against the scenario's component kinds.
    pub fn validate(self, experiment: Experiment) -> Result<(), DomainError> {
        let Some(index) = self.target() else {
            return Ok(());
        };
        experiment.check_component_index(index)?;
        let spec = &experiment.components()[index];
        match (self, spec.kind) {
            (Action::TurnOn(_) | Action::TurnOff(_), ComponentKind::Toggleable) => Ok(()),
            (Action::PublishCorrect(_), ComponentKind::Publishable) => Ok(()),
            (Action::PublishCorrect(_), ComponentKind::Toggleable) => {
                Err(DomainError::InvalidActionTarget {
                    action: self.verb(),
                    component: spec.name,
                    reason: "component is toggleable, not a data publisher",
                })
            }
            (_, ComponentKind::Publishable) => Err(DomainError::InvalidActionTarget {
                action: self.verb(),
                component: spec.name,
                reason: "data publishers are restored with publish_correct",
            }),
            (Action::DoNothing, _) => unreachable!(),
        }
    }

    /// Applies the action to the component vector. Do-nothing is the
    /// identity; turn-on/off set the state outright; publish-correct
    /// restores the publisher to ON (publishing correct data).
    pub fn apply(
        self,
        components: &mut ComponentStateVector,
        experiment: Experiment,
    ) -> Result<(), DomainError> {
        self.validate(experiment)?;
        match self {
            Action::DoNothing => {}
            Action::TurnOn(i) => components.set(i, ComponentState::On),
            Action::TurnOff(i) => components.set(i, ComponentState::Off),
            Action::PublishCorrect(i) => components.set(i, ComponentState::On),
        }
        Ok(())
    }
}

/// The enumerated action space of a scenario: do-nothing first, then per
/// component either turn-on/turn-off (toggleable) or publish-correct
/// (publishable). 7 actions for experiment 1, 10 for experiment 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpace {
    experiment: Experiment,
    actions: Vec<Action>,
}

impl ActionSpace {
    pub fn new(experiment: Experiment) -> Self {
        let mut actions = Vec::new();
        actions.push(Action::DoNothing);
        for (i, spec) in experiment.components().iter().enumerate() {
            match spec.kind {
                ComponentKind::Toggleable => {
                    actions.push(Action::TurnOn(i));
                    actions.push(Action::TurnOff(i));
                }
                ComponentKind::Publishable => {}
            }
        }
        for (i, spec) in experiment.components().iter().enumerate() {
            if spec.kind == ComponentKind::Publishable {
                actions.push(Action::PublishCorrect(i));
            }
        }
        ActionSpace {
            experiment,
            actions,
        }
    }

    pub fn experiment(&self) -> Experiment {
        self.experiment
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<Action> {
        self.actions.get(id).copied()
    }

    pub fn id_of(&self, action: Action) -> Option<usize> {
        self.actions.iter().position(|a| *a == action)
    }

    pub fn iter(&self) -> impl Iterator<Item = Action> + '_ {
        self.actions.iter().copied()
    }

    /// The single action that returns a compromised component to nominal.
    pub fn restoring_action(&self, component: usize) -> Action {
        let spec = &self.experiment.components()[component];
        match (spec.kind, spec.nominal) {
            (ComponentKind::Toggleable, ComponentState::On) => Action::TurnOn(component),
            (ComponentKind::Toggleable, ComponentState::Off) => Action::TurnOff(component),
            (ComponentKind::Publishable, _) => Action::PublishCorrect(component),
        }
    }
}
