pub mod compare;
pub mod eval;
pub mod train;
pub mod transfer;

use std::path::{Path, PathBuf};

/// RNG stream used by agents during training; evaluation episodes use
/// streams 1..=N of the same seed, so keep this far away.
pub(crate) const AGENT_RNG_STREAM: u64 = 1 << 32;

/// Stream for stochastic evaluation policies (the random baseline).
pub(crate) const POLICY_RNG_STREAM: u64 = (1 << 32) + 1;

/// `model.json` -> `model<suffix>` next to it.
pub(crate) fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}
