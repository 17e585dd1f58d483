use std::path::{Path, PathBuf};

use genmetrics::analysis::Sampling;
use genmetrics::pixel::FilterKind;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Settings shared by every command. Any field may come from the config file;
/// command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub backbone: Option<String>,
    pub filter: Option<FilterKind>,
    pub resolution: Option<usize>,
    pub k_pr: Option<usize>,
    pub k_dc: Option<usize>,
    pub splits: Option<usize>,
    pub fractions: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub sampling: Option<Sampling>,
    pub ref_split: Option<String>,
    pub out: Option<PathBuf>,
    pub override_friendly_resizer: Option<bool>,
    pub allow_count_mismatch: Option<bool>,
    pub registry: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Fills every field still unset in `self` from `file`.
    pub fn or(self, file: RunConfig) -> RunConfig {
        RunConfig {
            backbone: self.backbone.or(file.backbone),
            filter: self.filter.or(file.filter),
            resolution: self.resolution.or(file.resolution),
            k_pr: self.k_pr.or(file.k_pr),
            k_dc: self.k_dc.or(file.k_dc),
            splits: self.splits.or(file.splits),
            fractions: self.fractions.or(file.fractions),
            seed: self.seed.or(file.seed),
            sampling: self.sampling.or(file.sampling),
            ref_split: self.ref_split.or(file.ref_split),
            out: self.out.or(file.out),
            override_friendly_resizer: self.override_friendly_resizer.or(file.override_friendly_resizer),
            allow_count_mismatch: self.allow_count_mismatch.or(file.allow_count_mismatch),
            registry: self.registry.or(file.registry),
        }
    }
}

/// Reference split declaration, `NAME:COUNT`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefSplit {
    pub name: String,
    pub count: usize,
}

pub fn parse_ref_split(text: &str) -> CliResult<RefSplit> {
    let bad = || CliError::Usage(format!("--ref-split expects NAME:COUNT, got '{text}'"));
    let (name, count) = text.rsplit_once(':').ok_or_else(bad)?;
    let count = count.trim().parse().map_err(|_| bad())?;
    if name.trim().is_empty() {
        return Err(bad());
    }
    Ok(RefSplit { name: name.trim().to_string(), count })
}
