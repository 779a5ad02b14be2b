//! Run directories and manifests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Environment variable that overrides the default output root.
pub const OUT_ENV: &str = "HWLAB_OUT";
/// Output root used when neither `--out` nor [`OUT_ENV`] is set.
pub const DEFAULT_OUT: &str = "runs";

/// First eight hex digits of the SHA-256 of the command and its resolved
/// parameters.
pub fn config_hash(command: &str, config: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    for (k, v) in config {
        h.update(format!("{k}={v}\n").as_bytes());
    }
    h.finalize().iter().take(4).map(|b| format!("{b:02x}")).collect()
}

/// `--out`, then `HWLAB_OUT`, then [`DEFAULT_OUT`].
pub fn output_root(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
    }
}

/// One summary line of a run: a named check with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryItem {
    pub name: String,
    pub pass: bool,
    pub value: Value,
}

impl SummaryItem {
    pub fn new(name: impl Into<String>, pass: bool, value: impl Serialize) -> Self {
        Self {
            name: name.into(),
            pass,
            value: serde_json::to_value(value).unwrap_or(Value::Null),
        }
    }
}

#[derive(Debug, Serialize)]
struct Versions {
    hwlab: &'static str,
    hwlab_cli: &'static str,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    pass: bool,
    items: &'a [SummaryItem],
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    config_hash: &'a str,
    seed: u64,
    started_at: String,
    wall_seconds: f64,
    versions: Versions,
    outputs: &'a [String],
    summary: Summary<'a>,
    exit_code: i32,
    error: Option<String>,
}

/// An output directory `{command}-{timestamp}-{hash}` under the root.
pub struct RunDir {
    pub path: PathBuf,
    command: String,
    hash: String,
    seed: u64,
    started: Instant,
    started_at: chrono::DateTime<chrono::Utc>,
    outputs: Vec<String>,
}

impl RunDir {
    pub fn create(root: &Path, command: &str, config: &BTreeMap<String, String>, seed: u64) -> Result<Self, CliError> {
        let started_at = chrono::Utc::now();
        let hash = config_hash(command, config);
        let base = format!("{command}-{}-{hash}", started_at.format("%Y%m%dT%H%M%S"));
        std::fs::create_dir_all(root)?;
        let mut path = root.join(&base);
        let mut k = 2;
        while path.exists() {
            path = root.join(format!("{base}-{k}"));
            k += 1;
        }
        std::fs::create_dir(&path)?;
        Ok(Self {
            path,
            command: command.to_string(),
            hash,
            seed,
            started: Instant::now(),
            started_at,
            outputs: Vec::new(),
        })
    }

    /// Path of an output file, registered for the manifest.
    pub fn file(&mut self, name: &str) -> PathBuf {
        self.outputs.push(name.to_string());
        self.path.join(name)
    }

    /// Writes `value` as pretty JSON.
    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let path = self.file(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Writes `manifest.json`.
    pub fn finish(
        &self,
        config: &BTreeMap<String, String>,
        items: &[SummaryItem],
        exit_code: i32,
        error: Option<String>,
    ) -> Result<(), CliError> {
        let manifest = Manifest {
            command: &self.command,
            config,
            config_hash: &self.hash,
            seed: self.seed,
            started_at: self.started_at.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            wall_seconds: self.started.elapsed().as_secs_f64(),
            versions: Versions {
                hwlab: hwlab::VERSION,
                hwlab_cli: env!("CARGO_PKG_VERSION"),
            },
            outputs: &self.outputs,
            summary: Summary {
                pass: error.is_none() && items.iter().all(|i| i.pass),
                items,
            },
            exit_code,
            error,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(self.path.join("manifest.json"), text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_on_command_and_config() {
        let mut c = BTreeMap::new();
        c.insert("n".to_string(), "64".to_string());
        let a = config_hash("szego", &c);
        assert_eq!(a.len(), 8);
        assert_eq!(a, config_hash("szego", &c));
        assert_ne!(a, config_hash("evolve", &c));
        c.insert("n".to_string(), "128".to_string());
        assert_ne!(a, config_hash("szego", &c));
    }

    #[test]
    fn run_dirs_do_not_collide() {
        let tmp = tempfile::tempdir().unwrap();
        let c = BTreeMap::new();
        let a = RunDir::create(tmp.path(), "check", &c, 0).unwrap();
        let b = RunDir::create(tmp.path(), "check", &c, 0).unwrap();
        assert_ne!(a.path, b.path);
        a.finish(&c, &[SummaryItem::new("x", true, 1.0)], 0, None).unwrap();
        let text = std::fs::read_to_string(a.path.join("manifest.json")).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["summary"]["pass"], Value::Bool(true));
        assert_eq!(v["command"], Value::String("check".into()));
    }
}
