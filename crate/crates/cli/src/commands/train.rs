use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ugvrl_core::agents::{dqn_train, train_q, greedy_policy, TrainedModel};
use ugvrl_core::{seeded_stream_rng, ActionSpace, SimpleEnv};

use crate::commands::{sibling_path, AGENT_RNG_STREAM};
use crate::config::load_simple_config;
use crate::episode_log::write_curve_csv;
use crate::error::CliError;
use crate::evaluation::evaluate_policy;
use crate::model::{save_model, Algorithm, ModelFile, ModelMetadata, ModelPayload, FORMAT_VERSION};
use crate::summary::{RunSummary, SummaryFile, TimingMetadata};

/// Greedy-evaluation episode count used to summarize a freshly trained
/// model (kept larger than the paper's three for lower variance).
pub const SUMMARY_EVAL_EPISODES: u32 = 100;

pub struct TrainOutcome {
    pub summary: RunSummary,
    pub timing: TimingMetadata,
    pub model_path: PathBuf,
    pub curve_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Trains in the simple environment and writes the model file, the
/// per-episode return curve, and a run summary next to it.
pub fn cmd_train(
    config_path: &Path,
    algorithm: Algorithm,
    out_model_path: &Path,
    seed_override: Option<u64>,
    episodes_override: Option<u32>,
) -> Result<TrainOutcome, CliError> {
    let file = load_simple_config(config_path)?;
    let mut scenario = file.scenario.clone();
    if let Some(seed) = seed_override {
        scenario.seed = seed;
    }
    let seed = scenario.seed;
    let mut env = SimpleEnv::new(scenario.clone())?;
    let mut agent_rng = seeded_stream_rng(seed, AGENT_RNG_STREAM);

    let start = Instant::now();
    let (payload, returns, lengths, trained, metadata) = match algorithm {
        Algorithm::Random => {
            return Err(CliError::Usage(
                "the random baseline has no trainable model; use `eval --algorithm random`".into(),
            ))
        }
        Algorithm::QLearning => {
            let mut params = file.q_learning;
            if let Some(episodes) = episodes_override {
                params.episodes = episodes;
            }
            let result = train_q(&mut env, &params, &mut agent_rng)?;
            let payload = ModelPayload::QTable {
                num_states: result.table.num_states(),
                num_actions: result.table.num_actions(),
                values: result.table.values().to_vec(),
            };
            let steps: u64 = result.episode_lengths.iter().map(|l| u64::from(*l)).sum();
            let metadata = ModelMetadata {
                seed,
                attack_prob: scenario.attack_prob,
                training_time_seconds: 0.0,
                trained_episodes: u64::from(params.episodes),
                trained_timesteps: steps,
            };
            (
                payload,
                result.episode_returns,
                result.episode_lengths,
                TrainedModel::Table(result.table),
                metadata,
            )
        }
        Algorithm::Dqn => {
            if episodes_override.is_some() {
                return Err(CliError::Usage(
                    "--episodes applies to q-learning; set [dqn] total_timesteps in the config"
                        .into(),
                ));
            }
            let params = file.dqn;
            let result = dqn_train(&mut env, &params, &mut agent_rng)?;
            let payload = ModelPayload::Mlp {
                layer_sizes: result.net.layer_sizes(),
                params: result.net.flat_params(),
            };
            let metadata = ModelMetadata {
                seed,
                attack_prob: scenario.attack_prob,
                training_time_seconds: 0.0,
                trained_episodes: result.episode_returns.len() as u64,
                trained_timesteps: params.total_timesteps,
            };
            (
                payload,
                result.episode_returns,
                result.episode_lengths,
                TrainedModel::Net(result.net),
                metadata,
            )
        }
    };
    let training_time_seconds = start.elapsed().as_secs_f64();

    let model = ModelFile {
        format_version: FORMAT_VERSION,
        experiment: scenario.experiment,
        algorithm,
        payload,
        metadata: ModelMetadata {
            training_time_seconds,
            ..metadata
        },
    };
    if let Some(parent) = out_model_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    save_model(out_model_path, &model)?;

    let curve_path = sibling_path(out_model_path, "_curve.csv");
    let curve = BufWriter::new(File::create(&curve_path)?);
    write_curve_csv(curve, &returns, &lengths)?;

    // Summarize the trained greedy policy over fresh evaluation streams.
    let mut policy = greedy_policy(trained, ActionSpace::new(scenario.experiment));
    let outcome = evaluate_policy::<std::io::Sink>(
        &mut env,
        policy.as_mut(),
        SUMMARY_EVAL_EPISODES,
        seed,
        None,
    )?;
    let summary = RunSummary {
        algorithm,
        experiment: scenario.experiment,
        episodes_evaluated: SUMMARY_EVAL_EPISODES,
        mean_reward: outcome.mean_reward(),
        mean_timesteps: outcome.mean_timesteps(),
        seed,
        attack_prob: scenario.attack_prob,
    };
    let timing = TimingMetadata {
        training_time_seconds: Some(training_time_seconds),
    };
    let summary_path = sibling_path(out_model_path, "_summary.json");
    let summary_file = SummaryFile {
        summary: summary.clone(),
        metadata: timing.clone(),
    };
    std::fs::write(
        &summary_path,
        serde_json::to_string_pretty(&summary_file)
            .map_err(|e| CliError::Runtime(anyhow::Error::new(e)))?
            + "\n",
    )?;

    Ok(TrainOutcome {
        summary,
        timing,
        model_path: out_model_path.to_path_buf(),
        curve_path,
        summary_path,
    })
}
