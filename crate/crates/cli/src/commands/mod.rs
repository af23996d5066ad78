//! One module per subcommand. Each returns a [`Report`]: a JSON summary,
//! flat named metrics (what `regress` checks), and files to write.

mod feasibility;
mod regress;
mod simulate;
mod spin;
mod sweep;
mod tensors;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::config::{CommandKind, Scenario};
use crate::error::{CliError, CliResult};

pub use feasibility::feasibility;
pub use regress::{regress, RegressOutcome, RegressRow};
pub use simulate::{simulate, trajectory_csv};
pub use spin::spin;
pub use sweep::{sweep, SweepRow};
pub use tensors::tensors;

/// Command-line overrides shared by all commands.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub stride: Option<usize>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: Value,
    pub metrics: BTreeMap<String, f64>,
    /// (file name, contents)
    pub files: Vec<(String, String)>,
}

impl Report {
    pub fn write_files(&self, dir: &Path) -> CliResult<()> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (name, body) in &self.files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }

    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }
}

pub fn run(kind: CommandKind, scn: &Scenario, opts: RunOptions) -> CliResult<Report> {
    match kind {
        CommandKind::Spin => spin(scn),
        CommandKind::Tensors => tensors(scn),
        CommandKind::Simulate => simulate(scn, opts),
        CommandKind::Sweep => sweep(scn, None, opts),
        CommandKind::Feasibility => feasibility(scn),
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub(crate) fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

pub(crate) fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}
