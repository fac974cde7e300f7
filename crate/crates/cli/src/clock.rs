use std::time::Duration;

use ugvrl_core::integrated::MissionClock;

/// Paces the mission loop against wall time: each simulated control period
/// waits `sim_dt / scale` seconds. Scale 1 is real time; larger scales run
/// accelerated. Outcomes are identical at every scale, only pacing changes.
#[derive(Debug, Clone, Copy)]
pub struct PacedClock {
    pub scale: f64,
}

impl PacedClock {
    pub fn new(scale: f64) -> Self {
        PacedClock { scale }
    }
}

impl MissionClock for PacedClock {
    fn wait(&mut self, sim_dt: f64) {
        let wall = sim_dt / self.scale;
        if wall > 0.0 {
            std::thread::sleep(Duration::from_secs_f64(wall));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ugvrl_core::agents::{GreedyTablePolicy, QTable};
    use ugvrl_core::integrated::{run_mission, InstantClock, IntegratedScenario};
    use ugvrl_core::{ActionSpace, Experiment};

    #[test]
    fn outcomes_are_clock_scale_invariant() {
        let mut scenario = IntegratedScenario::new(Experiment::Exp1);
        scenario.max_time = 12.0;
        scenario.route_length = 4.0;
        scenario.speed = 1.0;
        scenario.min_attack_bound = 2.0;
        scenario.max_attack_bound = 4.0;
        scenario.seed = 3;
        let run = |clock: &mut dyn MissionClock| {
            let table = QTable::new(scenario.experiment.num_observations(), 7);
            let mut policy =
                GreedyTablePolicy::new(table, ActionSpace::new(scenario.experiment));
            run_mission(&mut policy, &scenario, clock, |_| {}).unwrap()
        };
        let instant = run(&mut InstantClock);
        let paced = run(&mut PacedClock::new(10_000.0));
        assert_eq!(instant, paced);
    }
}
