//! JSON reports and CSV data files.

use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub metrics: Value,
    pub pass: bool,
    /// (header, rows)
    pub csv: Option<(Vec<String>, Vec<Vec<String>>)>,
    /// Additional JSON documents written as `<stem>.<name>.json`.
    pub extra: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &'static str, config: impl Serialize) -> Result<Self> {
        Ok(Self {
            command,
            config: serde_json::to_value(config)?,
            metrics: json!({}),
            pass: true,
            csv: None,
            extra: Vec::new(),
        })
    }

    pub fn metric(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.metrics[key] = serde_json::to_value(value)?;
        Ok(())
    }

    pub fn csv<S: ToString>(&mut self, header: &[&str], rows: Vec<Vec<S>>) {
        self.csv = Some((
            header.iter().map(|h| h.to_string()).collect(),
            rows.into_iter()
                .map(|r| r.into_iter().map(|c| c.to_string()).collect())
                .collect(),
        ));
    }

    /// Write `<stem>.json` (and `<stem>.csv` if present) into `dir`.
    pub fn write(&self, dir: &Path, stem: &str, runtime: Duration) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "metrics": self.metrics,
            "pass": self.pass,
            "runtime_seconds": runtime.as_secs_f64(),
        });
        let mut written = Vec::new();
        let path = dir.join(format!("{stem}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
        written.push(path);
        if let Some((header, rows)) = &self.csv {
            let path = dir.join(format!("{stem}.csv"));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
            written.push(path);
        }
        for (name, v) in &self.extra {
            let path = dir.join(format!("{stem}.{name}.json"));
            std::fs::write(&path, serde_json::to_string(v)? + "\n")?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Rows (value, count) of an integer histogram.
pub fn histogram_rows(h: &tpng::stats::Histogram) -> Vec<Vec<String>> {
    h.counts
        .iter()
        .map(|(k, c)| vec![k.to_string(), c.to_string()])
        .collect()
}
