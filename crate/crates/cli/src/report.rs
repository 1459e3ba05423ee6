use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::error::{io_err, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub items: usize,
    pub passed: usize,
    pub failed: usize,
    /// Rows worth a human look that do not fail the run.
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    /// False when a checked invariant was violated.
    pub ok: bool,
    pub summary: Summary,
    pub findings: Vec<String>,
    pub rows: Vec<Value>,
    pub wall_clock_ms: u128,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig) -> Self {
        ExperimentReport {
            schema: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            ok: true,
            summary: Summary::default(),
            findings: Vec::new(),
            rows: Vec::new(),
            wall_clock_ms: 0,
        }
    }

    pub fn push(&mut self, row: Value, passed: bool) {
        self.summary.items += 1;
        if passed {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
            self.ok = false;
        }
        self.rows.push(row);
    }

    /// A row that is reported but never fails the run.
    pub fn push_flagged(&mut self, row: Value, flagged: bool) {
        self.summary.items += 1;
        self.summary.passed += 1;
        if flagged {
            self.summary.flagged += 1;
        }
        self.rows.push(row);
    }

    pub fn finish(mut self, start: Instant) -> Self {
        self.wall_clock_ms = start.elapsed().as_millis();
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(io_err(path))
    }

    /// One CSV line per row, one column per scalar field seen in any row.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut cols = BTreeSet::new();
        for row in &self.rows {
            if let Value::Object(m) = row {
                cols.extend(m.iter().filter(|(_, v)| !v.is_array() && !v.is_object()).map(|(k, _)| k.clone()));
            }
        }
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&cols)?;
        for row in &self.rows {
            let rec: Vec<String> = cols
                .iter()
                .map(|c| match row.get(c) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect();
            w.write_record(&rec)?;
        }
        w.flush().map_err(io_err(path))?;
        Ok(())
    }
}
