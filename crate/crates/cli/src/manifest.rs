use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::{write_file, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one command invocation, written next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub parameters: Value,
    pub artifacts: Vec<String>,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, parameters: Value) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            parameters,
            artifacts: Vec::new(),
            duration_seconds: 0.0,
        }
    }

    /// Writes `manifest.json` listing `artifacts` and returns the full list of
    /// files written, manifest included.
    pub fn finish(
        mut self,
        out_dir: &Path,
        artifacts: Vec<PathBuf>,
        started: Instant,
    ) -> CliResult<Vec<PathBuf>> {
        self.artifacts = artifacts
            .iter()
            .map(|p| {
                p.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default()
            })
            .collect();
        self.duration_seconds = started.elapsed().as_secs_f64();
        let path = out_dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(&self).expect("manifest serializes");
        write_file(&path, &(json + "\n"))?;
        let mut all = artifacts;
        all.push(path);
        Ok(all)
    }
}
