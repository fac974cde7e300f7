use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ugvrl_cli::commands::compare::cmd_compare;
use ugvrl_cli::commands::eval::{cmd_eval, EvalArgs};
use ugvrl_cli::commands::train::cmd_train;
use ugvrl_cli::commands::transfer::cmd_transfer;
use ugvrl_cli::model::Algorithm;
use ugvrl_cli::summary::TimingMetadata;
use ugvrl_cli::CliError;

/// Train, evaluate, compare and transfer incident-response agents for a
/// simulated unmanned ground vehicle.
#[derive(Parser)]
#[command(name = "ugvrl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train an agent in the simple environment and write a model file.
    Train {
        /// Scenario/hyperparameter config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Which agent to train.
        #[arg(long)]
        algorithm: Algorithm,
        /// Output model path (JSON); the return curve and summary land
        /// next to it.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the number of q-learning training episodes.
        #[arg(long)]
        episodes: Option<u32>,
    },
    /// Evaluate a trained model (or the random baseline) greedily.
    Eval {
        /// Trained model file from `train`.
        #[arg(long, conflicts_with = "algorithm")]
        model: Option<PathBuf>,
        /// Evaluate a model-free baseline; only `random` is valid here.
        #[arg(long)]
        algorithm: Option<Algorithm>,
        #[arg(long)]
        config: PathBuf,
        /// Evaluation episode count.
        #[arg(long, default_value_t = 100)]
        episodes: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for episodes.csv and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train the strategy lineup and emit comparison curves and a chart.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated training seeds; curves are averaged over them.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        /// Output directory for curves.csv, chart.svg and report.json.
        #[arg(long)]
        out: PathBuf,
        /// Overwrite a non-empty output directory.
        #[arg(long)]
        force: bool,
        /// Also train and plot the DQN agent.
        #[arg(long)]
        dqn: bool,
    },
    /// Run a trained policy through integrated missions (sim-to-sim).
    Transfer {
        #[arg(long)]
        model: PathBuf,
        /// Integrated scenario config (TOML).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 20)]
        missions: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for per-mission event logs and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Pace missions at wall-clock speed instead of the configured
        /// clock_scale.
        #[arg(long)]
        realtime: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train {
            config,
            algorithm,
            out,
            seed,
            episodes,
        } => {
            let outcome = cmd_train(&config, algorithm, &out, seed, episodes)?;
            outcome.summary.print(&outcome.timing);
            println!("model:              {}", outcome.model_path.display());
            println!("return curve:       {}", outcome.curve_path.display());
            println!("summary:            {}", outcome.summary_path.display());
        }
        Command::Eval {
            model,
            algorithm,
            config,
            episodes,
            seed,
            out,
        } => {
            let result = cmd_eval(EvalArgs {
                model_path: model.as_deref(),
                algorithm,
                config_path: &config,
                episodes,
                seed_override: seed,
                out_dir: out.as_deref(),
            })?;
            result.summary.print(&TimingMetadata::default());
            println!(
                "goal reached:       {:.0}% of episodes",
                100.0 * result.outcome.goal_rate()
            );
        }
        Command::Compare {
            config,
            seeds,
            out,
            force,
            dqn,
        } => {
            let report = cmd_compare(&config, &seeds, &out, force, dqn)?;
            println!("strategy            episodes  final-100 mean  overall mean");
            for (name, stats) in &report.strategies {
                println!(
                    "{name:<19} {:>8}  {:>14.2}  {:>12.2}",
                    stats.episodes, stats.final_100_mean, stats.overall_mean
                );
            }
            println!("outputs in {}", out.display());
        }
        Command::Transfer {
            model,
            config,
            missions,
            seed,
            out,
            realtime,
        } => {
            let report = cmd_transfer(&model, &config, missions, seed, out.as_deref(), realtime)?;
            println!(
                "success rate:       {}/{} = {:.0}% (95% CI {:.0}%..{:.0}%)",
                report.successes,
                report.missions,
                100.0 * report.success_rate,
                100.0 * report.ci_low,
                100.0 * report.ci_high
            );
            println!("mean elapsed:       {:.1} s", report.mean_elapsed);
            println!("mean attacks:       {:.1}", report.mean_attacks);
            println!("mean responses:     {:.1}", report.mean_responses);
            println!("mean reward:        {:.1}", report.mean_reward);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
