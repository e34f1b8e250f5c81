use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use likeness::io::sha256_file;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct MetricEntry {
    pub value: f64,
    pub details: Value,
}

/// Machine-readable run record. Inputs are keyed by path and carry the
/// SHA-256 of the file contents.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub inputs: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, MetricEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            seed: None,
            inputs: BTreeMap::new(),
            metrics: BTreeMap::new(),
            timestamp: None,
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), CliError> {
        let digest = sha256_file(path)?;
        self.inputs.insert(path.display().to_string(), digest);
        Ok(())
    }

    pub fn add_metric(&mut self, name: &str, value: f64, details: Value) {
        self.metrics
            .insert(name.to_string(), MetricEntry { value, details });
    }

    /// Aligned `name  value` table for stdout.
    pub fn table(&self) -> String {
        let width = self.metrics.keys().map(|k| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (name, entry) in &self.metrics {
            out.push_str(&format!("{name:<width$}  {:.6}\n", entry.value));
        }
        out
    }

    pub fn write_json(&mut self, path: &Path, with_timestamp: bool) -> Result<(), CliError> {
        if with_timestamp {
            self.timestamp = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs());
        }
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Input(format!("cannot serialize report: {e}")))?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
