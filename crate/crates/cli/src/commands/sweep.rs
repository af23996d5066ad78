use std::collections::BTreeMap;

use onq_core::dynamics::run_swap_protocol;
use rayon::prelude::*;
use serde_json::json;

use super::simulate::protocol_params;
use super::{flag, fmt_f64, pretty, Report, RunOptions};
use crate::config::{section, Scenario};
use crate::error::{CliError, CliResult, Context};
use crate::resolve;
use crate::sweep::{apply, SweepSpec};

pub const SWEEP_HEADER: &str = "value,fidelity,overlap_fidelity,total_duration_s,steps";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub fidelity: f64,
    pub overlap_fidelity: f64,
    pub total_duration: f64,
    pub steps: usize,
}

fn run_point(scn: &Scenario, spec: &SweepSpec, value: f64, opts: RunOptions) -> CliResult<SweepRow> {
    let point = Scenario { config: apply(&scn.config, &spec.parameter, value)?, base_dir: scn.base_dir.clone() };
    let t = resolve::transduction(&point, opts.stride)?;
    let mut params = protocol_params(&t);
    params.options.diagnostics = false;
    let context = format!("{} = {}", spec.parameter, fmt_f64(value));
    let r = run_swap_protocol(&params).ctx(&context)?;
    Ok(SweepRow {
        value,
        fidelity: r.fidelity,
        overlap_fidelity: r.overlap_fidelity,
        total_duration: r.stage_durations.iter().sum(),
        steps: r.steps,
    })
}

/// Swap-protocol fidelity at every sweep point.
///
/// Points run on a pool of `opts.workers` threads (all cores when unset);
/// rows keep input order.
pub fn sweep(scn: &Scenario, spec: Option<&SweepSpec>, opts: RunOptions) -> CliResult<Report> {
    let spec = match spec {
        Some(s) => s,
        None => section(&scn.config.sweep, "sweep")?,
    };
    let points = spec.points()?;
    // Resolve the path once up front so a bad path is a config error even
    // if a worker would fail first on something else.
    apply(&scn.config, &spec.parameter, points[0])?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.workers {
        if n == 0 {
            return Err(CliError::config("workers must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::config(format!("worker pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .map(|&v| run_point(scn, spec, v, opts))
            .collect::<CliResult<Vec<_>>>()
    })?;

    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for r in &rows {
        let cells = [
            fmt_f64(r.value),
            fmt_f64(r.fidelity),
            fmt_f64(r.overlap_fidelity),
            fmt_f64(r.total_duration),
            r.steps.to_string(),
        ];
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }

    let fid: Vec<f64> = rows.iter().map(|r| r.fidelity).collect();
    let mut metrics = BTreeMap::new();
    for (k, f) in fid.iter().enumerate() {
        metrics.insert(format!("fidelity.{k}"), *f);
    }
    let non_increasing = fid.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    metrics.insert("fidelity_non_increasing".into(), flag(non_increasing));
    metrics.insert("fidelity_first".into(), fid[0]);
    metrics.insert("fidelity_last".into(), fid[fid.len() - 1]);
    metrics.insert("fidelity_drop".into(), fid[0] - fid[fid.len() - 1]);

    let summary = json!({
        "command": "sweep",
        "scenario": scn.name(),
        "parameter": spec.parameter,
        "values": rows.iter().map(|r| r.value).collect::<Vec<_>>(),
        "fidelity": fid,
        "fidelity_non_increasing": non_increasing,
    });
    let files = vec![("sweep.csv".to_string(), csv), ("sweep.json".to_string(), pretty(&summary))];
    Ok(Report { summary, metrics, files })
}
