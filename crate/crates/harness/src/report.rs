//! Suite reports as text and JSON.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Trial index, or the corpus entry name.
    pub trial: String,
    pub seed: u64,
    pub term: String,
    /// Smallest failing term found by shrinking, when it differs.
    pub shrunk: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    /// Trials that could not be run (e.g. no suitable term was found).
    pub skipped: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} trials, {} skipped, {} failures, seed {}, {} ms",
            self.suite,
            self.trials,
            self.skipped,
            self.failures.len(),
            self.seed,
            self.elapsed_ms
        )?;
        for x in &self.failures {
            writeln!(f, "  [{}] seed {}: {}", x.trial, x.seed, x.detail)?;
            writeln!(f, "    term:   {}", x.term)?;
            if let Some(s) = &x.shrunk {
                writeln!(f, "    shrunk: {s}")?;
            }
        }
        Ok(())
    }
}
