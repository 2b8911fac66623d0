use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// Optional TOML configuration; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub pairs: Option<PathBuf>,
    #[serde(default)]
    pub model: Vec<PathBuf>,
    pub space: Option<PathBuf>,
    #[serde(default)]
    pub datasets: BTreeMap<String, PathBuf>,
    pub out: Option<PathBuf>,
    pub multiword: Option<bool>,
    pub weighting: Option<String>,
    pub rank: Option<String>,
    pub rank_grid: Option<Vec<usize>>,
    pub n_grid: Option<Vec<usize>>,
    #[serde(default)]
    pub measure: Vec<String>,
    pub top_n: Option<usize>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub min_count: Option<u64>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Settings echoed into artifact headers and hashed into the config id. Paths
/// and the job count are excluded; input files enter through content hashes.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    command: String,
    seed: u64,
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(command: &str, seed: u64) -> Self {
        Provenance { command: command.to_string(), seed, entries: Vec::new() }
    }

    pub fn setting(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    /// Records the SHA-256 of an input file's contents under `key`.
    pub fn input(&mut self, key: &str, path: &Path) -> Result<&mut Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(self.setting(key, format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))))
    }

    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("command={}\nseed={}\n", self.command, self.seed));
        for (k, v) in &self.entries {
            h.update(format!("{k}={v}\n"));
        }
        hex::encode(h.finalize())[..16].to_string()
    }

    /// Header lines, without comment markers.
    pub fn header(&self) -> Vec<String> {
        let mut lines = vec![
            format!("hypernym {} {}", env!("CARGO_PKG_VERSION"), self.command),
            format!("config={} seed={}", self.config_hash(), self.seed),
        ];
        for (k, v) in &self.entries {
            lines.push(format!("{k}={v}"));
        }
        lines
    }

    pub fn header_text(&self) -> String {
        let mut out = String::new();
        for line in self.header() {
            let _ = writeln!(out, "# {line}");
        }
        out
    }
}

pub fn require_file(path: &Path, what: &str) -> Result<()> {
    if !path.is_file() {
        bail!("{what} not found: {}", path.display());
    }
    Ok(())
}

pub fn require_output(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        if !parent.is_dir() {
            bail!("output directory does not exist: {}", parent.display());
        }
    }
    Ok(())
}

/// Appends `suffix` to the file name of `prefix`.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
