use std::collections::BTreeMap;

use onq_core::dynamics::{run_swap_protocol, SimResult, SwapProtocolParams};
use onq_core::units::{KHZ_2PI, MHZ_2PI};
use serde_json::json;

use super::{fmt_f64, pretty, Report, RunOptions};
use crate::config::Scenario;
use crate::error::{CliResult, Context};
use crate::resolve::{self, Transduction};

pub const TRAJECTORY_HEADER: &str = "t_s,pop_optical,pop_spin,pop_mw,trace,fidelity_running";

pub fn trajectory_csv(r: &SimResult) -> String {
    let mut s = String::with_capacity(64 * (r.times.len() + 1));
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for k in 0..r.times.len() {
        let row = [r.times[k], r.pop_optical[k], r.pop_spin[k], r.pop_mw[k], r.trace_series[k], r.fidelity_running[k]];
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub(crate) fn protocol_params(t: &Transduction) -> SwapProtocolParams {
    SwapProtocolParams { system: t.params, schedule: t.schedule.clone(), options: t.options }
}

/// Runs the swap protocol, then again with doubled Fock truncations.
pub fn simulate(scn: &Scenario, opts: RunOptions) -> CliResult<Report> {
    let t = resolve::transduction(scn, opts.stride)?;
    let params = protocol_params(&t);
    let result = run_swap_protocol(&params).ctx("swap protocol")?;

    let mut doubled = params.clone();
    doubled.system.optical_dim *= 2;
    doubled.system.mw_dim *= 2;
    doubled.options.diagnostics = false;
    let wide = run_swap_protocol(&doubled).ctx("swap protocol (doubled truncation)")?;
    let truncation_delta = (wide.fidelity - result.fidelity).abs();

    let p = &t.params;
    let mut metrics = BTreeMap::new();
    metrics.insert("fidelity".into(), result.fidelity);
    metrics.insert("overlap_fidelity".into(), result.overlap_fidelity);
    metrics.insert("truncation_delta".into(), truncation_delta);
    metrics.insert("g_optical_MHz_2pi".into(), p.g_optical / MHZ_2PI);
    metrics.insert("g_mw_MHz_2pi".into(), p.g_mw / MHZ_2PI);
    metrics.insert("kappa_optical_kHz_2pi".into(), p.kappa_optical / KHZ_2PI);
    metrics.insert("kappa_mw_kHz_2pi".into(), p.kappa_mw / KHZ_2PI);
    metrics.insert("gamma_n_kHz_2pi".into(), p.gamma_n / KHZ_2PI);
    metrics.insert("total_duration_s".into(), result.stage_durations.iter().sum());
    metrics.insert("max_trace_deviation".into(), result.max_trace_deviation);
    metrics.insert("max_hermiticity_error".into(), result.max_hermiticity_error);
    metrics.insert("min_eigenvalue".into(), result.min_eigenvalue);

    let summary = json!({
        "command": "simulate",
        "scenario": scn.name(),
        "fidelity": result.fidelity,
        "overlap_fidelity": result.overlap_fidelity,
        "truncation_sensitivity_delta": truncation_delta,
        "stage_durations_s": result.stage_durations,
        "steps": result.steps,
        "couplings_rad_per_s": {
            "g_optical": p.g_optical,
            "g_mw": p.g_mw,
            "kappa_optical": p.kappa_optical,
            "kappa_mw": p.kappa_mw,
            "gamma_n": p.gamma_n,
            "delta": p.delta,
        },
        "couplings_MHz_2pi": {
            "g_optical": p.g_optical / MHZ_2PI,
            "g_mw": p.g_mw / MHZ_2PI,
            "kappa_optical": p.kappa_optical / MHZ_2PI,
            "kappa_mw": p.kappa_mw / MHZ_2PI,
            "gamma_n": p.gamma_n / MHZ_2PI,
            "delta": p.delta / MHZ_2PI,
        },
        "truncation": { "optical": p.optical_dim, "mw": p.mw_dim },
        "diagnostics": {
            "max_trace_deviation": result.max_trace_deviation,
            "max_hermiticity_error": result.max_hermiticity_error,
            "min_eigenvalue": result.min_eigenvalue,
        },
    });

    let out = scn.config.output.clone().unwrap_or_default();
    let files = vec![
        (out.trajectory.unwrap_or_else(|| "trajectory.csv".into()), trajectory_csv(&result)),
        (out.summary.unwrap_or_else(|| "summary.json".into()), pretty(&summary)),
    ];
    Ok(Report { summary, metrics, files })
}
