use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use ugvrl_core::agents::{dqn_train, run_episode, train_q, RandomPolicy};
use ugvrl_core::{seeded_stream_rng, SimpleEnv};

use crate::chart::{line_chart, Series};
use crate::commands::{AGENT_RNG_STREAM, POLICY_RNG_STREAM};
use crate::config::load_simple_config;
use crate::error::CliError;
use crate::evaluation::mean;

/// Strategy names in chart/CSV order.
const RANDOM: &str = "random";
const EPSILON_GREEDY: &str = "q_epsilon_greedy";
const ARGMAX: &str = "q_argmax";
const DQN: &str = "dqn";

#[derive(Debug, Serialize)]
pub struct StrategyStats {
    pub episodes: usize,
    /// Mean return over the last (up to) 100 episodes.
    pub final_100_mean: f64,
    pub overall_mean: f64,
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub seeds: Vec<u64>,
    pub strategies: BTreeMap<String, StrategyStats>,
}

/// Trains/evaluates the strategy lineup (random baseline, epsilon-greedy
/// Q-learning, argmax Q-learning, optionally DQN), averaging per-episode
/// returns across seeds, and emits a curves CSV plus an SVG chart.
pub fn cmd_compare(
    config_path: &Path,
    seeds: &[u64],
    out_dir: &Path,
    force: bool,
    include_dqn: bool,
) -> Result<CompareReport, CliError> {
    if seeds.is_empty() {
        return Err(CliError::Usage("--seeds needs at least one seed".into()));
    }
    if out_dir.exists() {
        let occupied = std::fs::read_dir(out_dir)?.next().is_some();
        if occupied && !force {
            return Err(CliError::Config(format!(
                "output directory {} is not empty; pass --force to overwrite",
                out_dir.display()
            )));
        }
    }
    std::fs::create_dir_all(out_dir)?;

    let file = load_simple_config(config_path)?;
    let mut curves: Vec<(String, Vec<f64>)> = Vec::new();

    let mut strategy_curves: Vec<Vec<Vec<f64>>> = vec![Vec::new(); if include_dqn { 4 } else { 3 }];
    for &seed in seeds {
        let mut scenario = file.scenario.clone();
        scenario.seed = seed;

        // Random baseline: plain rollouts, one per training episode.
        let mut env = SimpleEnv::new(scenario.clone())?;
        let mut random_policy = RandomPolicy::new(
            env.action_space().clone(),
            seeded_stream_rng(seed, POLICY_RNG_STREAM),
        );
        let mut random_returns = Vec::with_capacity(file.q_learning.episodes as usize);
        for _ in 0..file.q_learning.episodes {
            env.reset();
            let summary = run_episode(&mut env, &mut random_policy, |_| {})?;
            random_returns.push(summary.total_reward);
        }
        strategy_curves[0].push(random_returns);

        // Epsilon-greedy Q-learning training curve.
        let mut env = SimpleEnv::new(scenario.clone())?;
        let eps_result = train_q(
            &mut env,
            &file.q_learning,
            &mut seeded_stream_rng(seed, AGENT_RNG_STREAM),
        )?;
        strategy_curves[1].push(eps_result.episode_returns);

        // Argmax strategy: always exploit the current table.
        let mut argmax_params = file.q_learning;
        argmax_params.epsilon_initial = 0.0;
        argmax_params.epsilon_final = 0.0;
        let mut env = SimpleEnv::new(scenario.clone())?;
        let argmax_result = train_q(
            &mut env,
            &argmax_params,
            &mut seeded_stream_rng(seed, AGENT_RNG_STREAM),
        )?;
        strategy_curves[2].push(argmax_result.episode_returns);

        if include_dqn {
            let mut env = SimpleEnv::new(scenario.clone())?;
            let dqn_result = dqn_train(
                &mut env,
                &file.dqn,
                &mut seeded_stream_rng(seed, AGENT_RNG_STREAM),
            )?;
            strategy_curves[3].push(dqn_result.episode_returns);
        }
    }

    let names: Vec<&str> = if include_dqn {
        vec![RANDOM, EPSILON_GREEDY, ARGMAX, DQN]
    } else {
        vec![RANDOM, EPSILON_GREEDY, ARGMAX]
    };
    for (name, per_seed) in names.iter().zip(&strategy_curves) {
        curves.push((name.to_string(), average_curves(per_seed)));
    }

    let mut csv = String::new();
    let _ = writeln!(csv, "episode,{}", names.join(","));
    let rows = curves.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    for i in 0..rows {
        let _ = write!(csv, "{i}");
        for (_, curve) in &curves {
            match curve.get(i) {
                Some(v) => {
                    let _ = write!(csv, ",{v}");
                }
                None => {
                    let _ = write!(csv, ",");
                }
            }
        }
        csv.push('\n');
    }
    std::fs::write(out_dir.join("curves.csv"), csv)?;

    let series: Vec<Series> = curves
        .iter()
        .map(|(name, curve)| Series {
            name: name.clone(),
            points: curve
                .iter()
                .enumerate()
                .map(|(i, v)| (i as f64, *v))
                .collect(),
        })
        .collect();
    let svg = line_chart(
        "Total reward per training episode",
        "episode",
        "total reward",
        &series,
    );
    std::fs::write(out_dir.join("chart.svg"), svg)?;

    let mut strategies = BTreeMap::new();
    for (name, curve) in &curves {
        let tail = &curve[curve.len().saturating_sub(100)..];
        strategies.insert(
            name.clone(),
            StrategyStats {
                episodes: curve.len(),
                final_100_mean: mean(tail),
                overall_mean: mean(curve),
            },
        );
    }
    let report = CompareReport {
        seeds: seeds.to_vec(),
        strategies,
    };
    std::fs::write(
        out_dir.join("report.json"),
        serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Runtime(anyhow::Error::new(e)))?
            + "\n",
    )?;
    Ok(report)
}

/// Element-wise mean of per-seed curves, truncated to the shortest.
fn average_curves(per_seed: &[Vec<f64>]) -> Vec<f64> {
    if per_seed.is_empty() {
        return Vec::new();
    }
    let len = per_seed.iter().map(Vec::len).min().unwrap_or(0);
    (0..len)
        .map(|i| per_seed.iter().map(|c| c[i]).sum::<f64>() / per_seed.len() as f64)
        .collect()
}
