use std::collections::BTreeMap;
use std::fs::File;

use onq_core::constants::BOHR_RADIUS;
use onq_core::spin::NuclearSpecies;
use onq_core::tensors::{
    c_closed_form, d_closed_form, fit_response_tensors, mirror_symmetry_report, read_efg_series, Axis,
    EFG_COMPONENTS, EFG_COMPONENT_NAMES,
};
use onq_core::units::{angular_to_ev, ANGSTROM};
use serde_json::{json, Value};

use super::{flag, pretty, Report};
use crate::config::{section, Scenario};
use crate::error::{CliError, CliResult, Context};
use crate::resolve;
use crate::units::{optional, Dimension, Quantity};

fn pair_name(i: usize, j: usize) -> &'static str {
    EFG_COMPONENT_NAMES[onq_core::tensors::efg_component_index(i, j)]
}

fn energy_ev(q: &Quantity, key: &str) -> CliResult<f64> {
    Ok(angular_to_ev(q.get(Dimension::Frequency, key)?))
}

fn bohr_radius_angstrom(q: &Option<Quantity>, key: &str) -> CliResult<f64> {
    Ok(optional(q, Dimension::Length, key, BOHR_RADIUS)? / ANGSTROM)
}

fn closed_form_pair(
    sp: &NuclearSpecies,
    gap_ev: f64,
    pump_ev: Option<f64>,
    a0: f64,
    context: &str,
) -> CliResult<(f64, Option<f64>)> {
    let c = c_closed_form(sp, gap_ev, a0).ctx(context)?;
    let d = pump_ev.map(|w| d_closed_form(sp, gap_ev, w, a0)).transpose().ctx(context)?;
    Ok((c, d))
}

/// Fitted C/D from an EFG-vs-field series and/or closed-form estimates.
///
/// Tensor entries are in 2π·MHz/(V/Å)ⁿ; fit coefficients are in
/// V/Å² per (V/Å)^k.
pub fn tensors(scn: &Scenario) -> CliResult<Report> {
    let tc = section(&scn.config.tensors, "tensors")?;
    if tc.efg_series.is_none() && tc.closed_form.is_empty() {
        return Err(CliError::config("`[tensors]` needs `efg_series` or `[[tensors.closed_form]]` entries"));
    }
    let mut metrics = BTreeMap::new();
    let mut summary = serde_json::Map::new();
    summary.insert("command".into(), json!("tensors"));

    if let Some(rel) = &tc.efg_series {
        let sp = resolve::species(scn)?;
        let path = scn.resolve(rel);
        let f = File::open(&path).map_err(|e| CliError::io(&path, e))?;
        let context = path.display().to_string();
        let series = read_efg_series(f, std::slice::from_ref(&sp)).ctx(&context)?;
        let report = fit_response_tensors(&series, tc.fit_order.unwrap_or(2)).ctx(&context)?;

        let fits: Vec<Value> = report
            .fits
            .iter()
            .map(|f| {
                json!({
                    "component": pair_name(f.component.0, f.component.1),
                    "axis": f.axis.name(),
                    "coefficients": f.coefficients,
                    "std_errors": f.std_errors,
                    "residual_norm": f.residual_norm,
                })
            })
            .collect();
        let cross: Vec<Value> = report
            .cross_fits
            .iter()
            .map(|f| {
                json!({
                    "component": pair_name(f.component.0, f.component.1),
                    "axes": format!("{}{}", f.axes.0, f.axes.1),
                    "mixed_coefficient": f.mixed_coefficient,
                    "residual_norm": f.residual_norm,
                })
            })
            .collect();
        let residual_max = report
            .fits
            .iter()
            .map(|f| f.residual_norm)
            .chain(report.cross_fits.iter().map(|f| f.residual_norm))
            .fold(0.0, f64::max);

        let mut c_entries = serde_json::Map::new();
        let mut d_entries = serde_json::Map::new();
        for (n, &(i, j)) in EFG_COMPONENTS.iter().enumerate() {
            for p in &report.axes {
                let key = format!("{}.{}", EFG_COMPONENT_NAMES[n], p);
                let v = report.c.get(i, j, p.index());
                metrics.insert(format!("c.{key}"), v);
                c_entries.insert(key, json!(v));
            }
            for p in Axis::ALL {
                for q in Axis::ALL.into_iter().filter(|q| q.index() >= p.index()) {
                    let v = report.d.get(i, j, p.index(), q.index());
                    let swept = report.axes.contains(&p) && report.axes.contains(&q);
                    if swept && (p == q || v != 0.0) {
                        let key = format!("{}.{}{}", EFG_COMPONENT_NAMES[n], p, q);
                        metrics.insert(format!("d.{key}"), v);
                        d_entries.insert(key, json!(v));
                    }
                }
            }
        }
        metrics.insert("c_max_abs".into(), report.c.max_abs());
        metrics.insert("d_max_abs".into(), report.d.max_abs());
        metrics.insert("residual_max".into(), residual_max);

        let gap = tc.band_gap.as_ref().map(|q| energy_ev(q, "tensors.band_gap")).transpose()?;
        let pump = tc.pump_photon.as_ref().map(|q| energy_ev(q, "tensors.pump_photon")).transpose()?;
        let closed = match gap {
            Some(g) => {
                let a0 = bohr_radius_angstrom(&tc.bohr_radius, "tensors.bohr_radius")?;
                let (c, d) = closed_form_pair(&sp, g, pump, a0, "closed form")?;
                metrics.insert("closed_form.c".into(), c);
                if let Some(d) = d {
                    metrics.insert("closed_form.d".into(), d);
                }
                json!({ "band_gap_eV": g, "pump_photon_eV": pump, "bohr_radius_angstrom": a0, "c": c, "d": d })
            }
            None => Value::Null,
        };

        let mirror = match &tc.mirror_axis {
            Some(a) => {
                let axis: Axis = a.parse().ctx("tensors.mirror_axis")?;
                let m = mirror_symmetry_report(&series, axis).ctx("mirror symmetry")?;
                metrics.insert("mirror.forbidden_count".into(), m.forbidden_count() as f64);
                metrics.insert("mirror.respected".into(), flag(m.all_respected()));
                json!({
                    "axis": axis.name(),
                    "all_respected": m.all_respected(),
                    "components": m.components.iter().map(|c| json!({
                        "component": c.name,
                        "linear_must_vanish": c.linear_must_vanish,
                        "linear_coefficient": c.linear_coefficient,
                        "tolerance": c.tolerance,
                        "respected": c.respected,
                    })).collect::<Vec<_>>(),
                })
            }
            None => Value::Null,
        };

        summary.insert(
            "fit".into(),
            json!({
                "species": sp.label,
                "samples": series.samples().len(),
                "axes": report.axes.iter().map(|a| a.name()).collect::<Vec<_>>(),
                "c_MHz_2pi_per_V_per_angstrom": c_entries,
                "d_MHz_2pi_per_V_per_angstrom2": d_entries,
                "component_fits": fits,
                "cross_fits": cross,
                "residual_max": residual_max,
                "closed_form": closed,
                "mirror": mirror,
            }),
        );
    }

    let mut rows = Vec::new();
    for (k, e) in tc.closed_form.iter().enumerate() {
        let key = |f: &str| format!("tensors.closed_form.{k}.{f}");
        let q = e.quadrupole_moment.get(Dimension::QuadrupoleMoment, &key("quadrupole_moment"))?;
        let sp = NuclearSpecies::new(e.label.clone(), e.spin, q, 0.0).ctx(&key("spin"))?;
        let gap = energy_ev(&e.band_gap, &key("band_gap"))?;
        let pump = e.pump_photon.as_ref().map(|q| energy_ev(q, &key("pump_photon"))).transpose()?;
        let a0 = bohr_radius_angstrom(&e.bohr_radius, &key("bohr_radius"))?;
        let (c, d) = closed_form_pair(&sp, gap, pump, a0, &e.label)?;
        metrics.insert(format!("closed_form.{}.c", e.label), c);
        if let Some(d) = d {
            metrics.insert(format!("closed_form.{}.d", e.label), d);
        }
        rows.push(json!({
            "label": e.label,
            "system": e.system,
            "spin_I": e.spin,
            "quadrupole_moment_barn": q,
            "band_gap_eV": gap,
            "pump_photon_eV": pump,
            "bohr_radius_angstrom": a0,
            "c_MHz_2pi_per_V_per_angstrom": c,
            "d_MHz_2pi_per_V_per_angstrom2": d,
        }));
    }
    if !rows.is_empty() {
        summary.insert("closed_form".into(), Value::Array(rows));
    }

    let summary = Value::Object(summary);
    let files = vec![("tensors.json".to_string(), pretty(&summary))];
    Ok(Report { summary, metrics, files })
}
