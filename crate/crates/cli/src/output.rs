//! Run directories `runs/<timestamp>-<hash>/` with artifacts and a manifest.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub struct Run {
    dir: PathBuf,
    outputs: Vec<(String, String)>,
}

impl Run {
    /// Creates `<root>/<unix seconds>-<hash prefix>`, or `exact` when given.
    pub fn create(root: &Path, exact: Option<&Path>, config_hash: &str) -> Result<Run> {
        let dir = match exact {
            Some(p) => p.to_path_buf(),
            None => {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                let base = format!("{secs}-{}", &config_hash[..12]);
                let mut dir = root.join(&base);
                let mut k = 1;
                while dir.exists() {
                    dir = root.join(format!("{base}-{k}"));
                    k += 1;
                }
                dir
            }
        };
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Run { dir, outputs: Vec::new() })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push((name.to_string(), sha256_hex(bytes)));
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    pub fn csv<R: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = R>) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
        self.write(name, &bytes)
    }

    /// CSV with an explicit header, for rows of variable width.
    pub fn csv_records(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
        self.write(name, &bytes)
    }

    pub fn finish(mut self, command: &str, config: &Value, config_hash: &str) -> Result<PathBuf> {
        let outputs: Vec<Value> = self.outputs.iter().map(|(f, h)| json!({"file": f, "sha256": h})).collect();
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let manifest = json!({
            "schema_version": crate::config::SCHEMA_VERSION,
            "tool": "hopnet",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": config,
            "config_hash": config_hash,
            "created_unix": created,
            "threads": rayon::current_num_threads(),
            "outputs": outputs,
        });
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        std::fs::write(self.dir.join("manifest.json"), bytes)?;
        self.outputs.clear();
        Ok(self.dir)
    }
}
