//! Run manifests: what ran, on which inputs, producing which outputs.

use super::{CliError, OutFormat};
use crate::region::{CfInput, RatePoint, RegionConfig, SearchConfig};
use crate::sim::SimConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

pub fn digest_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn new(path: impl Into<String>, sha256: String) -> Self {
        Self {
            path: path.into(),
            sha256,
        }
    }
}

/// The full resolved config of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RunConfig {
    Region {
        channel: String,
        region: RegionConfig,
        out: Vec<OutFormat>,
        r4: bool,
    },
    Decompose {
        channel: String,
        point: RatePoint,
        search: SearchConfig,
    },
    Simulate {
        channel: String,
        sim: SimConfig,
        n_list: Vec<usize>,
    },
    CfCheck {
        channel: String,
        cf_input: FileDigest,
        cf: CfInput,
        delta: f64,
    },
}

impl RunConfig {
    pub fn command(&self) -> &'static str {
        match self {
            RunConfig::Region { .. } => "region",
            RunConfig::Decompose { .. } => "decompose",
            RunConfig::Simulate { .. } => "simulate",
            RunConfig::CfCheck { .. } => "cf-check",
        }
    }

    pub fn channel(&self) -> &str {
        match self {
            RunConfig::Region { channel, .. }
            | RunConfig::Decompose { channel, .. }
            | RunConfig::Simulate { channel, .. }
            | RunConfig::CfCheck { channel, .. } => channel,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            RunConfig::Region { region, .. } => Some(region.search.sample_seed),
            RunConfig::Decompose { search, .. } => Some(search.sample_seed),
            RunConfig::Simulate { sim, .. } => Some(sim.seed),
            RunConfig::CfCheck { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: RunConfig,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub inputs: Vec<FileDigest>,
    /// Paths relative to `out_dir`.
    pub outputs: Vec<FileDigest>,
    pub out_dir: String,
    pub wall_clock_secs: f64,
}

impl RunManifest {
    pub fn new(config: RunConfig, inputs: Vec<FileDigest>, outputs: Vec<FileDigest>, out_dir: &Path, secs: f64) -> Self {
        Self {
            command: config.command().to_string(),
            seed: config.seed(),
            config,
            tool_version: format!("twrc {}", env!("CARGO_PKG_VERSION")),
            inputs,
            outputs,
            out_dir: out_dir.display().to_string(),
            wall_clock_secs: secs,
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.manifest.json", self.command)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifests always serialize");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read manifest {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("malformed manifest {}: {e}", path.display())))
    }
}
