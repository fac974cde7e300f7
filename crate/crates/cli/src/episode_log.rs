//! Per-step episode CSV logs, one row per environment step.

use std::io::Write;

use ugvrl_core::agents::StepRecord;

use crate::error::CliError;

pub const EPISODE_CSV_HEADER: &str =
    "episode,step,timestep,obs_index,action_id,reward,terminated,truncated";

pub struct EpisodeLogWriter<W: Write> {
    out: W,
}

impl<W: Write> EpisodeLogWriter<W> {
    pub fn new(mut out: W) -> Result<Self, CliError> {
        writeln!(out, "{EPISODE_CSV_HEADER}")?;
        Ok(EpisodeLogWriter { out })
    }

    pub fn record(&mut self, episode: u32, rec: &StepRecord) -> Result<(), CliError> {
        writeln!(
            self.out,
            "{},{},{},{},{},{},{},{}",
            episode,
            rec.step,
            rec.timestep,
            rec.obs_index,
            rec.action_id,
            rec.reward,
            rec.terminated,
            rec.truncated
        )?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Per-episode return curve: `episode,return,steps`.
pub const CURVE_CSV_HEADER: &str = "episode,return,steps";

pub fn write_curve_csv<W: Write>(
    mut out: W,
    returns: &[f64],
    lengths: &[u32],
) -> Result<(), CliError> {
    writeln!(out, "{CURVE_CSV_HEADER}")?;
    for (i, (ret, len)) in returns.iter().zip(lengths).enumerate() {
        writeln!(out, "{i},{ret},{len}")?;
    }
    Ok(())
}

/// Minimal reader for consistency checks: returns (episode, reward,
/// terminated, truncated) per row.
pub fn parse_episode_csv(text: &str) -> Result<Vec<(u32, f64, bool, bool)>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == EPISODE_CSV_HEADER => {}
        other => {
            return Err(CliError::Config(format!(
                "bad episode CSV header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(CliError::Config(format!(
                "episode CSV row {} has {} fields",
                n + 2,
                fields.len()
            )));
        }
        let parse_err =
            |what: &str| CliError::Config(format!("episode CSV row {}: bad {what}", n + 2));
        rows.push((
            fields[0].parse().map_err(|_| parse_err("episode"))?,
            fields[5].parse().map_err(|_| parse_err("reward"))?,
            fields[6].parse().map_err(|_| parse_err("terminated"))?,
            fields[7].parse().map_err(|_| parse_err("truncated"))?,
        ));
    }
    Ok(rows)
}
