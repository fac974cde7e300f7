use proptest::prelude::*;

use ugvrl_core::agents::{run_episode, RandomPolicy};
use ugvrl_core::integrated::{BusMessage, TopicBus};
use ugvrl_core::{seeded_rng, ComponentState, Experiment, ScenarioConfig, SimpleEnv};

proptest! {
    /// Episode bookkeeping: the reported return is the sum of emitted step
    /// rewards, episodes never exceed the timestep budget, and exactly one
    /// of terminated/truncated is raised, only on the final step.
    #[test]
    fn episode_bookkeeping_invariants(
        seed in 0u64..500,
        action_seed in 0u64..500,
        attack_prob in 0.0f64..=1.0,
        goal in 3u32..30,
        slack in 0u32..30,
        exp2 in any::<bool>(),
    ) {
        let experiment = if exp2 { Experiment::Exp2 } else { Experiment::Exp1 };
        let mut cfg = ScenarioConfig::new(experiment).with_seed(seed);
        cfg.goal_step = goal;
        cfg.max_timesteps = goal + slack;
        cfg.attack_prob = attack_prob;
        let mut env = SimpleEnv::new(cfg.clone()).unwrap();
        let mut policy = RandomPolicy::new(env.action_space().clone(), seeded_rng(action_seed));

        let mut records = Vec::new();
        let summary = run_episode(&mut env, &mut policy, |rec| records.push(*rec)).unwrap();

        let sum: f64 = records.iter().map(|r| r.reward).sum();
        prop_assert_eq!(summary.total_reward, sum);
        prop_assert!(summary.steps <= cfg.max_timesteps);
        let ends = records
            .iter()
            .filter(|r| r.terminated || r.truncated)
            .count();
        prop_assert_eq!(ends, 1);
        let last = records.last().unwrap();
        prop_assert!(last.terminated ^ last.truncated);
        prop_assert!(records.iter().all(|r| r.timestep <= cfg.max_timesteps));
    }

    /// Identical seeds and action streams replay identical episodes.
    #[test]
    fn episodes_replay_deterministically(seed in 0u64..200, action_seed in 0u64..200) {
        let mut cfg = ScenarioConfig::new(Experiment::Exp1).with_seed(seed);
        cfg.goal_step = 15;
        cfg.max_timesteps = 40;
        cfg.attack_prob = 0.5;
        let run = || {
            let mut env = SimpleEnv::new(cfg.clone()).unwrap();
            let mut policy = RandomPolicy::new(env.action_space().clone(), seeded_rng(action_seed));
            let mut trace = Vec::new();
            let summary = run_episode(&mut env, &mut policy, |rec| {
                trace.push((rec.obs_index, rec.action_id, rec.reward.to_bits()));
            }).unwrap();
            (trace, summary.total_reward.to_bits(), summary.steps)
        };
        prop_assert_eq!(run(), run());
    }

    /// Per-topic FIFO: however publishes and polls interleave, every
    /// subscriber sees exactly the topic log from its subscription point on.
    #[test]
    fn bus_delivery_is_prefix_consistent_fifo(
        ops in proptest::collection::vec((0usize..3, 0usize..64, any::<bool>()), 1..150),
    ) {
        let topics = ["Generator", "Force Brake", "control"];
        let mut bus = TopicBus::new();
        let mut subs: Vec<_> = topics.iter().map(|t| bus.subscribe(t)).collect();
        let mut seen: Vec<Vec<BusMessage>> = vec![Vec::new(); topics.len()];

        for (topic_idx, payload, poll_after) in ops {
            bus.publish(
                topics[topic_idx],
                BusMessage::ComponentState {
                    component: payload,
                    state: ComponentState::On,
                },
            );
            if poll_after {
                seen[topic_idx].extend(bus.poll(&mut subs[topic_idx]).to_vec());
            }
        }
        for (i, topic) in topics.iter().enumerate() {
            seen[i].extend(bus.poll(&mut subs[i]).to_vec());
            prop_assert_eq!(seen[i].as_slice(), bus.log(topic));
        }
    }
}
