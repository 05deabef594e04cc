//! `run.json`: what a command read, what it wrote, and how it was configured.
//! Deliberately free of timestamps and host details so reruns are
//! byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliResult, WithPath};

pub const RUN_FILE: &str = "run.json";
pub const ERROR_FILE: &str = "error.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub config_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub results: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
}

/// Collects provenance while a command runs, then writes `run.json`.
pub struct Run {
    out: PathBuf,
    record: RunRecord,
}

impl Run {
    pub fn new(command: &'static str, config: &impl Serialize, seed: Option<u64>, out: &Path) -> CliResult<Self> {
        let config = serde_json::to_value(config).expect("argument structs serialize");
        let config_digest = sha256_hex(config.to_string().as_bytes());
        fs::create_dir_all(out).at(out)?;
        Ok(Run {
            out: out.to_path_buf(),
            record: RunRecord {
                tool: "captionprobe",
                version: env!("CARGO_PKG_VERSION"),
                command,
                config,
                config_digest,
                seed,
                inputs: BTreeMap::new(),
                outputs: BTreeMap::new(),
                results: BTreeMap::new(),
                warnings: Vec::new(),
            },
        })
    }

    pub fn read(&mut self, path: &Path) -> CliResult<Vec<u8>> {
        let bytes = fs::read(path).at(path)?;
        self.record
            .inputs
            .insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }

    pub fn read_string(&mut self, path: &Path) -> CliResult<String> {
        let bytes = self.read(path)?;
        String::from_utf8(bytes).map_err(|_| crate::error::CliError::data(format!("{}: not UTF-8", path.display())))
    }

    /// Records a file the core library already read.
    pub fn note_input(&mut self, path: &Path) -> CliResult<()> {
        self.read(path).map(|_| ())
    }

    /// Writes `bytes` to `rel` under the output directory.
    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.out.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).at(parent)?;
        }
        fs::write(&path, bytes).at(&path)?;
        self.record.outputs.insert(rel.to_string(), sha256_hex(bytes));
        Ok(path)
    }

    /// Records a file under the output directory written by the core library.
    pub fn note_output(&mut self, rel: &str) -> CliResult<()> {
        let path = self.out.join(rel);
        let bytes = fs::read(&path).at(&path)?;
        self.record.outputs.insert(rel.to_string(), sha256_hex(&bytes));
        Ok(())
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        eprintln!("warning: {message}");
        self.record.warnings.push(message);
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.record
            .results
            .insert(key.to_string(), serde_json::to_value(value).expect("results serialize"));
    }

    pub fn finish(self) -> CliResult<()> {
        let mut body = serde_json::to_string_pretty(&self.record).expect("run record serializes");
        body.push('\n');
        let stale = self.out.join(ERROR_FILE);
        if stale.exists() {
            fs::remove_file(&stale).at(&stale)?;
        }
        let path = self.out.join(RUN_FILE);
        fs::write(&path, body).at(&path)
    }
}

/// Best-effort machine-readable failure summary next to the outputs.
pub fn write_error_summary(out: &Path, command: &str, kind: &str, exit_code: i32, message: &str) {
    let doc = serde_json::json!({
        "tool": "captionprobe",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "kind": kind,
        "exit_code": exit_code,
        "message": message,
    });
    if fs::create_dir_all(out).is_ok() {
        let _ = fs::write(out.join(ERROR_FILE), format!("{doc:#}\n"));
    }
}
