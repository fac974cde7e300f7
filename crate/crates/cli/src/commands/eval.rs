use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use ugvrl_core::agents::{greedy_policy, Policy, RandomPolicy};
use ugvrl_core::{seeded_stream_rng, ActionSpace, SimpleEnv};

use crate::commands::POLICY_RNG_STREAM;
use crate::config::load_simple_config;
use crate::episode_log::EpisodeLogWriter;
use crate::error::CliError;
use crate::evaluation::{evaluate_policy, EvalOutcome};
use crate::model::{load_model, Algorithm};
use crate::summary::{RunSummary, SummaryFile, TimingMetadata};

pub struct EvalArgs<'a> {
    pub model_path: Option<&'a Path>,
    /// Only `random` may be evaluated without a model file.
    pub algorithm: Option<Algorithm>,
    pub config_path: &'a Path,
    pub episodes: u32,
    pub seed_override: Option<u64>,
    pub out_dir: Option<&'a Path>,
}

pub struct EvalResult {
    pub summary: RunSummary,
    pub outcome: EvalOutcome,
}

/// Evaluates a trained model (or the random baseline) with the greedy
/// policy over seeded episode streams; optionally writes the per-step CSV
/// and summary JSON into `--out`.
pub fn cmd_eval(args: EvalArgs<'_>) -> Result<EvalResult, CliError> {
    if args.episodes == 0 {
        return Err(CliError::Usage("--episodes must be at least 1".into()));
    }
    let file = load_simple_config(args.config_path)?;
    let mut scenario = file.scenario.clone();
    if let Some(seed) = args.seed_override {
        scenario.seed = seed;
    }
    let seed = scenario.seed;
    let space = ActionSpace::new(scenario.experiment);

    let (mut policy, algorithm): (Box<dyn Policy>, Algorithm) =
        match (args.model_path, args.algorithm) {
            (Some(path), None) => {
                let model = load_model(path)?;
                if model.experiment != scenario.experiment {
                    return Err(CliError::Config(format!(
                        "model was trained on {} but the config is {}",
                        model.experiment, scenario.experiment
                    )));
                }
                (
                    greedy_policy(model.to_trained_model()?, space),
                    model.algorithm,
                )
            }
            (None, Some(Algorithm::Random)) => (
                Box::new(RandomPolicy::new(
                    space,
                    seeded_stream_rng(seed, POLICY_RNG_STREAM),
                )),
                Algorithm::Random,
            ),
            (None, Some(other)) => {
                return Err(CliError::Usage(format!(
                    "--algorithm {other} needs a trained model; pass --model"
                )))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "pass either --model or --algorithm random, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Usage(
                    "nothing to evaluate: pass --model or --algorithm random".into(),
                ))
            }
        };

    let mut env = SimpleEnv::new(scenario.clone())?;
    let outcome = match args.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let mut log = EpisodeLogWriter::new(BufWriter::new(File::create(
                dir.join("episodes.csv"),
            )?))?;
            evaluate_policy(
                &mut env,
                policy.as_mut(),
                args.episodes,
                seed,
                Some(&mut log),
            )?
        }
        None => {
            evaluate_policy::<std::io::Sink>(&mut env, policy.as_mut(), args.episodes, seed, None)?
        }
    };

    let summary = RunSummary {
        algorithm,
        experiment: scenario.experiment,
        episodes_evaluated: args.episodes,
        mean_reward: outcome.mean_reward(),
        mean_timesteps: outcome.mean_timesteps(),
        seed,
        attack_prob: scenario.attack_prob,
    };
    if let Some(dir) = args.out_dir {
        let file = SummaryFile {
            summary: summary.clone(),
            metadata: TimingMetadata::default(),
        };
        std::fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&file)
                .map_err(|e| CliError::Runtime(anyhow::Error::new(e)))?
                + "\n",
        )?;
    }
    Ok(EvalResult { summary, outcome })
}
