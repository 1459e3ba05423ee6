use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Effective settings of one run, echoed verbatim into its report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub p: u64,
    pub l: u64,
    pub seed: u64,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub num_deg: Option<usize>,
    pub den_deg: Option<usize>,
    pub u_height: Option<usize>,
    /// Witness search bound for commands that search.
    pub bound: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    /// Command-specific inputs.
    pub args: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn new(command: &str, p: u64, l: u64) -> Self {
        ExperimentConfig {
            command: command.to_string(),
            p,
            l,
            seed: 0,
            jobs: None,
            out: None,
            num_deg: None,
            den_deg: None,
            u_height: None,
            bound: None,
            checkpoint: None,
            args: BTreeMap::new(),
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("l", self.l)] {
            if !fqt::galois::is_prime(v) {
                return Err(CliError::Usage(format!("--{name} must be prime, got {v}")));
            }
        }
        if self.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        Ok(())
    }
}
