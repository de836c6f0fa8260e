//! Output files with their digests, so identical runs can be checked for
//! byte-identical results.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tlbm_core::equilibrium::ExpansionSpec;
use tlbm_core::model::ModelRecord;

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: &'static str,
    pub config: serde_json::Value,
    pub model: Option<ModelRecord>,
    pub expansion: Option<ExpansionSpec>,
    pub outputs: Vec<OutputDigest>,
    /// SHA-256 over every output's name and contents, in order.
    pub determinism_hash: String,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes output files into one directory and records their digests.
pub struct OutputSet {
    dir: PathBuf,
    outputs: Vec<OutputDigest>,
    combined: Sha256,
}

impl OutputSet {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        Ok(Self { dir: dir.to_path_buf(), outputs: Vec::new(), combined: Sha256::new() })
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(CliError::io(&path))?;
        self.combined.update(name.as_bytes());
        self.combined.update([0]);
        self.combined.update(contents);
        self.outputs.push(OutputDigest { file: name.to_string(), sha256: hex(&Sha256::digest(contents)) });
        Ok(path)
    }

    /// Writes `manifest.json` and returns the manifest.
    pub fn finish(
        self,
        command: &str,
        config: serde_json::Value,
        model: Option<ModelRecord>,
        expansion: Option<ExpansionSpec>,
    ) -> CliResult<RunManifest> {
        let manifest = RunManifest {
            command: command.to_string(),
            tool_version: TOOL_VERSION,
            config,
            model,
            expansion,
            determinism_hash: hex(&self.combined.finalize()),
            outputs: self.outputs,
        };
        let path = self.dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&path, text).map_err(CliError::io(&path))?;
        Ok(manifest)
    }
}
