//! Provenance record embedded in every output artifact.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TelegraphError};

/// Version of the CSV column layout and JSON schemas.
pub const SCHEMA_VERSION: u32 = 1;

/// First characters of the manifest line at the top of a CSV artifact.
pub const CSV_PREFIX: &str = "# manifest: ";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    /// Every option of the command after defaults were applied.
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// Seconds since the Unix epoch. `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
}

fn now() -> u64 {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()) {
        return epoch;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl RunManifest {
    pub fn new<P: Serialize>(command: &str, parameters: &P, seed: Option<u64>) -> Result<Self> {
        Ok(RunManifest {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters: serde_json::to_value(parameters).map_err(|e| TelegraphError::Domain(e.to_string()))?,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: now(),
        })
    }

    pub fn with_timestamp(mut self, timestamp: u64) -> Self {
        self.timestamp = timestamp;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    pub fn csv_line(&self) -> String {
        format!("{CSV_PREFIX}{}", self.to_json())
    }

    /// Recover the manifest from a CSV artifact (first line) or a JSON
    /// artifact (top-level `manifest` field).
    pub fn from_artifact(text: &str) -> Result<Self> {
        let bad = |e: serde_json::Error| TelegraphError::Domain(format!("unreadable manifest: {e}"));
        if let Some(rest) = text.lines().next().and_then(|l| l.strip_prefix(CSV_PREFIX)) {
            return serde_json::from_str(rest).map_err(bad);
        }
        let value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
        let manifest = value
            .get("manifest")
            .cloned()
            .ok_or_else(|| TelegraphError::Domain("artifact carries no manifest".into()))?;
        serde_json::from_value(manifest).map_err(bad)
    }
}
