use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use ugvrl_core::agents::greedy_policy;
use ugvrl_core::integrated::{run_mission, MissionResult};
use ugvrl_core::ActionSpace;

use crate::clock::PacedClock;
use crate::config::load_integrated_config;
use crate::error::CliError;
use crate::model::load_model;

#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub missions: u32,
    pub successes: u32,
    pub success_rate: f64,
    /// 95% binomial confidence interval (normal approximation).
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_elapsed: f64,
    pub mean_attacks: f64,
    pub mean_responses: f64,
    pub mean_reward: f64,
    pub seed: u64,
}

/// Runs N seeded missions of a trained policy in the integrated
/// environment; per-mission event logs go into `--out` when given.
pub fn cmd_transfer(
    model_path: &Path,
    config_path: &Path,
    missions: u32,
    seed_override: Option<u64>,
    out_dir: Option<&Path>,
    realtime: bool,
) -> Result<TransferReport, CliError> {
    if missions == 0 {
        return Err(CliError::Usage("--missions must be at least 1".into()));
    }
    let model = load_model(model_path)?;
    let mut scenario = load_integrated_config(config_path)?;
    if let Some(seed) = seed_override {
        scenario.seed = seed;
    }
    let root_seed = scenario.seed;
    if model.experiment != scenario.experiment {
        return Err(CliError::Config(format!(
            "model was trained on {} but the mission scenario is {}",
            model.experiment, scenario.experiment
        )));
    }
    let trained = model.to_trained_model()?;
    let mut clock = PacedClock::new(if realtime { 1.0 } else { scenario.clock_scale });

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }

    let mut results: Vec<MissionResult> = Vec::with_capacity(missions as usize);
    for mission in 0..missions {
        let mut mission_scenario = scenario.clone();
        mission_scenario.seed = mission_seed(root_seed, mission);
        let mut policy = greedy_policy(trained.clone(), ActionSpace::new(scenario.experiment));

        let result = match out_dir {
            Some(dir) => {
                let path = dir.join(format!("mission_{mission:03}.events.jsonl"));
                let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                let mut write_error = None;
                let result = run_mission(
                    policy.as_mut(),
                    &mission_scenario,
                    &mut clock,
                    |event| {
                        if write_error.is_none() {
                            let line = serde_json::to_string(event).expect("event serializes");
                            if let Err(e) = writeln!(file, "{line}") {
                                write_error = Some(e);
                            }
                        }
                    },
                )?;
                if let Some(e) = write_error {
                    return Err(e.into());
                }
                result
            }
            None => run_mission(policy.as_mut(), &mission_scenario, &mut clock, |_| {})?,
        };
        results.push(result);
    }

    let n = f64::from(missions);
    let successes = results.iter().filter(|r| r.success).count() as u32;
    let rate = f64::from(successes) / n;
    let half_width = 1.96 * (rate * (1.0 - rate) / n).sqrt();
    let report = TransferReport {
        missions,
        successes,
        success_rate: rate,
        ci_low: (rate - half_width).max(0.0),
        ci_high: (rate + half_width).min(1.0),
        mean_elapsed: results.iter().map(|r| r.elapsed).sum::<f64>() / n,
        mean_attacks: results.iter().map(|r| f64::from(r.attacks_injected)).sum::<f64>() / n,
        mean_responses: results.iter().map(|r| f64::from(r.responses)).sum::<f64>() / n,
        mean_reward: results.iter().map(|r| r.total_reward).sum::<f64>() / n,
        seed: root_seed,
    };
    if let Some(dir) = out_dir {
        std::fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Runtime(anyhow::Error::new(e)))?
                + "\n",
        )?;
    }
    Ok(report)
}

/// Independent per-mission seed derived from the root seed with a
/// golden-ratio stride; order-independent by construction.
pub fn mission_seed(root: u64, mission: u32) -> u64 {
    root.wrapping_add(u64::from(mission).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}
