//! The fast discrete environment used for all training. Attacks are
//! pre-scheduled per episode from a seeded generator, so a whole run is
//! reproducible from its config and seed.

use alloc::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{
    derive_vehicle_state, step_reward, Action, ActionSpace, ComponentStateVector, Observation,
    ScenarioConfig, Terminal, VehicleState,
};
use crate::error::DomainError;
use crate::{seeded_rng, seeded_stream_rng};

/// The timesteps at which the attacker strikes, and which component each
/// strike flips. At most one attack per timestep; keys lie in
/// `[0, max_timesteps)`. Rebuilt on every reset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttackSchedule {
    events: BTreeMap<u32, usize>,
}

impl AttackSchedule {
    pub fn from_events(events: BTreeMap<u32, usize>) -> Self {
        AttackSchedule { events }
    }

    pub fn get(&self, t: u32) -> Option<usize> {
        self.events.get(&t).copied()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.events.iter().map(|(t, c)| (*t, *c))
    }
}

/// Draws a fresh schedule: each timestep is attacked independently with
/// probability `attack_prob`, targeting a uniformly random component.
pub fn make_attack_list(
    attack_prob: f64,
    max_timesteps: u32,
    num_components: usize,
    rng: &mut ChaCha8Rng,
) -> AttackSchedule {
    let mut events = BTreeMap::new();
    for t in 0..max_timesteps {
        if rng.random_bool(attack_prob) {
            events.insert(t, rng.random_range(0..num_components));
        }
    }
    AttackSchedule { events }
}

/// One environment step's outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub obs: Observation,
    pub reward: f64,
    /// The goal was reached this step.
    pub terminated: bool,
    /// The timestep budget ran out this step.
    pub truncated: bool,
    /// Component the attacker flipped at the end of this step, if any.
    pub attacked: Option<usize>,
}

impl Step {
    pub fn done(&self) -> bool {
        self.terminated || self.truncated
    }
}

/// Discrete single-vehicle environment.
///
/// Step order: the agent's action is applied to the components first, then
/// the vehicle state is derived, the vehicle moves if driving, terminal
/// conditions are checked, and only then does a scheduled attack (if any)
/// land. The agent therefore observes an attack one step before it can
/// respond, and a restoring action keeps the vehicle driving that same step.
#[derive(Debug, Clone)]
pub struct SimpleEnv {
    cfg: ScenarioConfig,
    action_space: ActionSpace,
    rng: ChaCha8Rng,
    fixed_schedule: Option<AttackSchedule>,
    schedule: AttackSchedule,
    t: u32,
    position: u32,
    components: ComponentStateVector,
    vehicle: VehicleState,
    done: bool,
}

impl SimpleEnv {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, DomainError> {
        cfg.validate()?;
        let rng = seeded_rng(cfg.seed);
        let action_space = ActionSpace::new(cfg.experiment);
        let mut env = SimpleEnv {
            components: cfg.experiment.nominal_vector(),
            vehicle: VehicleState::Driving,
            schedule: AttackSchedule::default(),
            fixed_schedule: None,
            t: 0,
            position: 0,
            done: false,
            action_space,
            rng,
            cfg,
        };
        env.reset();
        Ok(env)
    }

    /// Starts a new episode: everything nominal, vehicle driving, and a
    /// fresh attack schedule drawn from the environment's generator.
    pub fn reset(&mut self) -> Observation {
        self.t = 0;
        self.position = 0;
        self.components = self.cfg.experiment.nominal_vector();
        self.vehicle = VehicleState::Driving;
        self.done = false;
        self.schedule = match &self.fixed_schedule {
            Some(schedule) => schedule.clone(),
            None => make_attack_list(
                self.cfg.attack_prob,
                self.cfg.max_timesteps,
                self.cfg.experiment.num_components(),
                &mut self.rng,
            ),
        };
        self.observation()
    }

    /// Reseeds the generator and resets, replaying the exact episode
    /// sequence that seed produced before.
    pub fn reseed(&mut self, seed: u64) -> Observation {
        self.rng = seeded_rng(seed);
        self.reset()
    }

    /// Reseeds onto an independent stream of `seed`; used to give each
    /// evaluation episode its own generator regardless of run order.
    pub fn reseed_stream(&mut self, seed: u64, stream: u64) -> Observation {
        self.rng = seeded_stream_rng(seed, stream);
        self.reset()
    }

    /// Pins the attack schedule so every reset replays the same attacks.
    pub fn set_fixed_schedule(&mut self, schedule: AttackSchedule) {
        self.fixed_schedule = Some(schedule);
        self.reset();
    }

    pub fn step(&mut self, action: Action) -> Result<Step, DomainError> {
        if self.done {
            return Err(DomainError::EpisodeFinished);
        }
        action.apply(&mut self.components, self.cfg.experiment)?;

        self.vehicle = derive_vehicle_state(
            &self.components,
            self.cfg.experiment,
            self.position,
            self.cfg.goal_step,
            self.vehicle,
        );
        if self.vehicle == VehicleState::Driving {
            self.position += 1;
        }
        let terminated = self.position >= self.cfg.goal_step;
        if terminated {
            self.vehicle = VehicleState::GoalReached;
        }

        self.t += 1;
        let truncated = !terminated && self.t >= self.cfg.max_timesteps;
        let terminal = if terminated {
            Terminal::Goal
        } else if truncated {
            Terminal::Timeout
        } else {
            Terminal::None
        };
        let reward = step_reward(self.vehicle, action, terminal, &self.cfg.rewards);

        self.done = terminated || truncated;
        let mut attacked = None;
        if !self.done {
            if let Some(component) = self.schedule.get(self.t) {
                self.components.toggle(component);
                self.vehicle = derive_vehicle_state(
                    &self.components,
                    self.cfg.experiment,
                    self.position,
                    self.cfg.goal_step,
                    self.vehicle,
                );
                attacked = Some(component);
            }
        }

        Ok(Step {
            obs: self.observation(),
            reward,
            terminated,
            truncated,
            attacked,
        })
    }

    pub fn observation(&self) -> Observation {
        Observation::new(self.components.clone(), self.vehicle)
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn action_space(&self) -> &ActionSpace {
        &self.action_space
    }

    pub fn schedule(&self) -> &AttackSchedule {
        &self.schedule
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn position(&self) -> u32 {
        self.position
    }

    pub fn is_done(&self) -> bool {
        self.done
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Experiment;
    use alloc::vec::Vec;

    fn cfg() -> ScenarioConfig {
        ScenarioConfig::new(Experiment::Exp1).with_seed(7)
    }

    #[test]
    fn empty_schedule_at_zero_probability() {
        let mut rng = seeded_rng(1);
        let schedule = make_attack_list(0.0, 1000, 3, &mut rng);
        assert!(schedule.is_empty());
    }

    #[test]
    fn full_schedule_at_certainty() {
        let mut rng = seeded_rng(1);
        let schedule = make_attack_list(1.0, 10, 3, &mut rng);
        assert_eq!(schedule.len(), 10);
        assert!(schedule.events().all(|(t, c)| t < 10 && c < 3));
    }

    #[test]
    fn event_count_tracks_binomial_mean() {
        // n=10000, p=0.5: sigma = sqrt(n*p*(1-p)) = 50, so 3 sigma = 150.
        let mut rng = seeded_rng(42);
        let schedule = make_attack_list(0.5, 10_000, 3, &mut rng);
        let count = schedule.len() as i64;
        assert!((count - 5000).abs() <= 150, "count {count}");
    }

    #[test]
    fn attack_toggle_is_involution() {
        let exp = Experiment::Exp1;
        let mut v = exp.nominal_vector();
        v.toggle(1);
        assert_eq!(v.get(1), Some(crate::domain::ComponentState::Off));
        v.toggle(1);
        assert!(v.is_nominal(exp));
    }

    #[test]
    fn reset_gives_nominal_driving_observation() {
        let mut env = SimpleEnv::new(cfg()).unwrap();
        let obs = env.reset();
        assert_eq!(obs.index, 14);
        assert_eq!(obs.vehicle, VehicleState::Driving);
    }

    #[test]
    fn same_seed_same_schedule() {
        let mut a = SimpleEnv::new(cfg()).unwrap();
        let mut b = SimpleEnv::new(cfg()).unwrap();
        for _ in 0..5 {
            a.reset();
            b.reset();
            assert_eq!(a.schedule(), b.schedule());
        }
    }

    #[test]
    fn different_seeds_give_different_schedules() {
        let mut differing = 0;
        for seed in 0..100u64 {
            let mut cfg_a = ScenarioConfig::new(Experiment::Exp1);
            cfg_a.attack_prob = 0.5;
            cfg_a.seed = seed;
            let mut cfg_b = cfg_a.clone();
            cfg_b.seed = seed + 1000;
            let a = SimpleEnv::new(cfg_a).unwrap();
            let b = SimpleEnv::new(cfg_b).unwrap();
            if a.schedule() != b.schedule() {
                differing += 1;
            }
        }
        assert!(differing >= 99, "only {differing} of 100 seed pairs differed");
    }

    #[test]
    fn do_nothing_moves_and_pays_two() {
        let mut config = cfg();
        config.attack_prob = 0.0;
        let mut env = SimpleEnv::new(config).unwrap();
        let step = env.step(Action::DoNothing).unwrap();
        assert_eq!(step.reward, 2.0);
        assert_eq!(env.position(), 1);
        assert!(!step.done());
    }

    #[test]
    fn repair_applies_before_state_derivation() {
        let mut config = cfg();
        config.attack_prob = 0.0;
        let mut env = SimpleEnv::new(config).unwrap();
        // Simulate an attack on the generator via a pinned schedule at t=1.
        let mut events = BTreeMap::new();
        events.insert(1, 1usize);
        env.set_fixed_schedule(AttackSchedule::from_events(events));
        let step = env.step(Action::DoNothing).unwrap();
        assert_eq!(step.attacked, Some(1));
        assert_eq!(step.obs.vehicle, VehicleState::Stationary);
        // The restoring action is applied before the vehicle state is
        // derived, so the vehicle drives (and moves) this very step.
        let position_before = env.position();
        let step = env.step(Action::TurnOn(1)).unwrap();
        assert_eq!(step.reward, -9.0);
        assert_eq!(step.obs.vehicle, VehicleState::Driving);
        assert_eq!(env.position(), position_before + 1);
    }

    #[test]
    fn goal_step_terminates_with_bonus() {
        let mut config = cfg();
        config.attack_prob = 0.0;
        config.goal_step = 5;
        config.max_timesteps = 10;
        let mut env = SimpleEnv::new(config).unwrap();
        for _ in 0..4 {
            let step = env.step(Action::DoNothing).unwrap();
            assert!(!step.done());
        }
        let step = env.step(Action::DoNothing).unwrap();
        assert!(step.terminated);
        assert!(!step.truncated);
        assert_eq!(step.reward, 52.0);
        assert_eq!(step.obs.vehicle, VehicleState::GoalReached);
        assert!(matches!(
            env.step(Action::DoNothing),
            Err(DomainError::EpisodeFinished)
        ));
    }

    #[test]
    fn timeout_truncates_with_penalty() {
        let mut config = cfg();
        config.attack_prob = 0.0;
        config.goal_step = 5;
        config.max_timesteps = 5;
        let mut env = SimpleEnv::new(config).unwrap();
        // One attack at t=1, never repaired: the vehicle stays halted.
        let mut events = BTreeMap::new();
        events.insert(1, 1usize);
        env.set_fixed_schedule(AttackSchedule::from_events(events));
        let mut last = None;
        for _ in 0..5 {
            last = Some(env.step(Action::DoNothing).unwrap());
            if last.as_ref().unwrap().done() {
                break;
            }
        }
        let last = last.unwrap();
        assert!(last.truncated);
        assert!(!last.terminated);
        assert_eq!(last.reward, -2.0 + -10.0);
    }

    #[test]
    fn invalid_action_is_rejected_and_state_unchanged() {
        let mut env = SimpleEnv::new(cfg()).unwrap();
        let before_t = env.t();
        assert!(env.step(Action::TurnOn(9)).is_err());
        assert!(env.step(Action::PublishCorrect(0)).is_err());
        assert_eq!(env.t(), before_t);
    }

    #[test]
    fn deterministic_given_seed_and_actions() {
        let mut config = cfg();
        config.attack_prob = 0.3;
        let run = |seed: u64| {
            let mut c = config.clone();
            c.seed = seed;
            let mut env = SimpleEnv::new(c).unwrap();
            let mut trace = Vec::new();
            for i in 0..200 {
                let action = if i % 3 == 0 { Action::TurnOn(1) } else { Action::DoNothing };
                let step = env.step(action).unwrap();
                trace.push((step.obs.index, step.reward.to_bits(), step.terminated, step.truncated));
                if step.done() {
                    env.reset();
                }
            }
            trace
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }

    #[test]
    fn no_attack_do_nothing_closed_form() {
        let mut config = cfg();
        config.attack_prob = 0.0;
        config.goal_step = 50;
        config.max_timesteps = 100;
        let mut env = SimpleEnv::new(config).unwrap();
        let mut total = 0.0;
        let mut steps = 0;
        loop {
            let step = env.step(Action::DoNothing).unwrap();
            total += step.reward;
            steps += 1;
            if step.done() {
                assert!(step.terminated);
                break;
            }
        }
        assert_eq!(steps, 50);
        assert_eq!(total, 2.0 * 50.0 + 50.0);
    }

    #[test]
    fn perfect_repair_reaches_goal_on_fixed_schedule() {
        let mut config = cfg();
        config.attack_prob = 0.9;
        config.goal_step = 40;
        config.max_timesteps = 120;
        let mut env = SimpleEnv::new(config).unwrap();
        let schedule = env.schedule().clone();
        env.set_fixed_schedule(schedule);
        let exp = env.config().experiment;
        let space = env.action_space().clone();
        let mut obs = env.reset();
        let mut steps = 0u32;
        loop {
            let action = obs
                .components
                .states()
                .iter()
                .zip(exp.components())
                .position(|(s, spec)| *s != spec.nominal)
                .map(|i| space.restoring_action(i))
                .unwrap_or(Action::DoNothing);
            let step = env.step(action).unwrap();
            steps += 1;
            if step.done() {
                assert!(step.terminated, "perfect repair must reach the goal");
                break;
            }
            obs = step.obs;
        }
        // Restoring actions keep the vehicle driving, so no step is lost.
        assert_eq!(steps, 40);
    }
}
