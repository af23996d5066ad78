use std::collections::BTreeMap;

use serde_json::json;

use super::{fmt_f64, pretty, run, Report, RunOptions};
use crate::config::Scenario;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct RegressRow {
    pub scenario: String,
    pub metric: String,
    /// `None` when the command did not report the metric.
    pub observed: Option<f64>,
    pub band: (f64, f64),
    pub absolute: bool,
    pub pass: bool,
    pub note: Option<String>,
}

impl RegressRow {
    pub fn line(&self) -> String {
        let obs = self.observed.map(fmt_f64).unwrap_or_else(|| "missing".into());
        let abs = if self.absolute { "|x| " } else { "" };
        format!(
            "{} {} {} = {} expected {}in [{}, {}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.scenario,
            self.metric,
            obs,
            abs,
            fmt_f64(self.band.0),
            fmt_f64(self.band.1),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressOutcome {
    pub rows: Vec<RegressRow>,
    pub report: Report,
}

impl RegressOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }
}

/// Runs each scenario's `command` and checks its `[[expect]]` bands.
pub fn regress(scenarios: &[Scenario], opts: RunOptions) -> CliResult<RegressOutcome> {
    let mut rows = Vec::new();
    for scn in scenarios {
        let name = scn.name().to_string();
        let kind = scn
            .config
            .command
            .ok_or_else(|| CliError::config(format!("scenario `{name}` has no `command` to run")))?;
        if scn.config.expect.is_empty() {
            log::warn!("scenario `{name}` has no expectations");
        }
        let report = run(kind, scn, opts)?;
        for e in &scn.config.expect {
            let band = e.band()?;
            let observed = report.metric(&e.metric);
            let pass = match observed {
                Some(x) => e.check(x)?,
                None => false,
            };
            rows.push(RegressRow {
                scenario: name.clone(),
                metric: e.metric.clone(),
                observed,
                band,
                absolute: e.absolute.unwrap_or(false),
                pass,
                note: e.note.clone(),
            });
        }
    }

    let failures = rows.iter().filter(|r| !r.pass).count();
    let summary = json!({
        "command": "regress",
        "checks": rows.len(),
        "failures": failures,
        "results": rows.iter().map(|r| json!({
            "scenario": r.scenario,
            "metric": r.metric,
            "observed": r.observed,
            "min": r.band.0,
            "max": r.band.1,
            "absolute": r.absolute,
            "pass": r.pass,
            "note": r.note,
        })).collect::<Vec<_>>(),
    });
    let mut metrics = BTreeMap::new();
    metrics.insert("checks".into(), rows.len() as f64);
    metrics.insert("failures".into(), failures as f64);
    let files = vec![("regress.json".to_string(), pretty(&summary))];
    Ok(RegressOutcome { rows, report: Report { summary, metrics, files } })
}
