use crate::domain::component::{ComponentStateVector, Experiment, VehicleState};

/// What the agent sees: the component vector, the vehicle state, and the
/// packed discrete index both agents key on.
///
/// The index is `vehicle * 2^k + component_bits` with k components, so the
/// encoding is a bijection onto `[0, 3 * 2^k)`: 24 observations for
/// experiment 1, 192 for experiment 2. Elapsed time and position are
/// deliberately not observed, which keeps the table small.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub components: ComponentStateVector,
    pub vehicle: VehicleState,
    pub index: usize,
}

impl Observation {
    pub fn new(components: ComponentStateVector, vehicle: VehicleState) -> Self {
        let index = encode(&components, vehicle);
        Observation {
            components,
            vehicle,
            index,
        }
    }

    /// Decodes an index back into an observation of the given scenario.
    pub fn from_index(index: usize, experiment: Experiment) -> Option<Self> {
        let k = experiment.num_components();
        let vehicle = VehicleState::from_index(index >> k)?;
        let components = ComponentStateVector::from_bits(index & ((1 << k) - 1), k);
        Some(Observation {
            components,
            vehicle,
            index,
        })
    }
}

/// Packs (component bits, vehicle state) into the discrete index.
pub fn encode(components: &ComponentStateVector, vehicle: VehicleState) -> usize {
    vehicle.index() * (1 << components.len()) + components.bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::component::ComponentState;

    #[test]
    fn exp1_nominal_driving_is_14() {
        let exp = Experiment::Exp1;
        // FB=OFF, Gen=ON, HV=ON -> bits 0,1,1 -> 6; Driving -> 1*8 + 6.
        let obs = Observation::new(exp.nominal_vector(), VehicleState::Driving);
        assert_eq!(obs.index, 14);
    }

    #[test]
    fn exp1_all_off_stationary_is_0() {
        let v = ComponentStateVector::from_bits(0, 3);
        assert_eq!(encode(&v, VehicleState::Stationary), 0);
    }

    #[test]
    fn exp2_all_on_goal_is_191() {
        let v = ComponentStateVector::new(vec![ComponentState::On; 6]);
        assert_eq!(encode(&v, VehicleState::GoalReached), 2 * 64 + 63);
    }

    #[test]
    fn round_trip_exhaustive() {
        for exp in [Experiment::Exp1, Experiment::Exp2] {
            for index in 0..exp.num_observations() {
                let obs = Observation::from_index(index, exp).unwrap();
                assert_eq!(encode(&obs.components, obs.vehicle), index);
                assert_eq!(Observation::new(obs.components.clone(), obs.vehicle), obs);
            }
            assert!(Observation::from_index(exp.num_observations(), exp).is_none());
        }
    }
}
