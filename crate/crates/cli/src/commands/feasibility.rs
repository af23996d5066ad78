use std::collections::BTreeMap;

use onq_core::dynamics::{cavity_suppression_factor, ensemble_emission_rate};
use onq_core::feasibility::{
    absorbed_power_density, dispersive_shift, incident_power_density, keldysh_parameter, linewidth_budget_check,
    single_spin_emission_rate, temperature_rise, two_photon_penetration_depth, KeldyshForm, LaserField,
    MaterialOptics, SampleGeometry, DEFAULT_LINEWIDTH_THRESHOLD, KELDYSH_THRESHOLD,
};
use onq_core::units::{angular_to_ev, KHZ_2PI, MHZ_2PI};
use serde_json::{json, Map, Value};

use super::{flag, pretty, Report};
use crate::config::{section, KeldyshFormConfig, Scenario};
use crate::error::{CliError, CliResult, Context};
use crate::resolve;
use crate::units::{optional, Dimension};

/// Default ΔT limit when `feasibility.max_temperature_rise` is absent, K.
pub const DEFAULT_MAX_TEMPERATURE_RISE: f64 = 100.0;

/// Heating, ionization, readout and linewidth budgets.
///
/// `[material]`, `[laser]` and `[geometry]` are required; the readout,
/// suppression, dispersive and linewidth blocks are evaluated when their
/// inputs are present.
pub fn feasibility(scn: &Scenario) -> CliResult<Report> {
    let cfg = &scn.config;
    let m = section(&cfg.material, "material")?;
    let l = section(&cfg.laser, "laser")?;
    let g = section(&cfg.geometry, "geometry")?;
    let settings = cfg.feasibility.clone().unwrap_or_default();

    let mat = MaterialOptics::new(
        angular_to_ev(m.band_gap.get(Dimension::Frequency, "material.band_gap")?),
        m.two_photon_absorption.get(Dimension::TwoPhotonAbsorption, "material.two_photon_absorption")?,
        m.thermal_conductivity.get(Dimension::ThermalConductivity, "material.thermal_conductivity")?,
        m.refractive_index,
        m.relative_permittivity.unwrap_or(1.0),
    )
    .ctx("material")?;
    let photon = match &l.photon_energy {
        Some(q) => q.get(Dimension::Frequency, "laser.photon_energy")?,
        None => return Err(CliError::config("missing key `laser.photon_energy`")),
    };
    let field = LaserField::new(
        l.amplitude.get(Dimension::ElectricField, "laser.amplitude")?,
        photon,
        optional(&l.linewidth, Dimension::Frequency, "laser.linewidth", 0.0)?,
    )
    .ctx("laser")?;
    let geom = SampleGeometry::new(
        g.depth.get(Dimension::Length, "geometry.depth")?,
        optional(&g.area, Dimension::Area, "geometry.area", 1.0)?,
    )
    .ctx("geometry")?;

    let mut metrics = BTreeMap::new();
    let mut out = Map::new();
    out.insert("command".into(), json!("feasibility"));
    out.insert("scenario".into(), json!(scn.name()));
    let mut flags = Vec::new();

    // heating
    let p_in = incident_power_density(&field);
    let d_p = two_photon_penetration_depth(&mat, &field);
    let absorbed = absorbed_power_density(p_in, &geom, d_p).ctx("absorbed power")?;
    let dt_lin = temperature_rise(&mat, &field, &geom);
    let dt_exact = absorbed.exact * geom.depth / mat.thermal_conductivity;
    let max_dt = optional(
        &settings.max_temperature_rise,
        Dimension::Temperature,
        "feasibility.max_temperature_rise",
        DEFAULT_MAX_TEMPERATURE_RISE,
    )?;
    let heating_ok = dt_lin < max_dt;
    flags.push(heating_ok);
    metrics.insert("incident_power_W_per_m2".into(), p_in);
    metrics.insert("penetration_depth_um".into(), d_p.meters() * 1e6);
    metrics.insert("absorbed_power_W_per_m2".into(), absorbed.exact);
    metrics.insert("absorbed_power_linearized_W_per_m2".into(), absorbed.linearized);
    metrics.insert("temperature_rise_K".into(), dt_lin);
    metrics.insert("temperature_rise_exact_K".into(), dt_exact);
    metrics.insert("heating_ok".into(), flag(heating_ok));
    out.insert(
        "heating".into(),
        json!({
            "incident_power_W_per_m2": p_in,
            "penetration_depth_m": if d_p.meters().is_finite() { json!(d_p.meters()) } else { Value::Null },
            "absorbed_power_W_per_m2": { "exact": absorbed.exact, "linearized": absorbed.linearized },
            "temperature_rise_K": dt_lin,
            "temperature_rise_exact_K": dt_exact,
            "max_temperature_rise_K": max_dt,
            "pass": heating_ok,
        }),
    );

    // ionization
    let form = match settings.keldysh_form.unwrap_or(KeldyshFormConfig::SquareRoot) {
        KeldyshFormConfig::SquareRoot => KeldyshForm::SquareRoot,
        KeldyshFormConfig::Squared => KeldyshForm::Squared,
    };
    let gamma = keldysh_parameter(&mat, &field, form);
    flags.push(gamma.tunnelling_negligible());
    metrics.insert("keldysh_gamma".into(), gamma.value());
    metrics.insert("tunnelling_negligible".into(), flag(gamma.tunnelling_negligible()));
    out.insert(
        "ionization".into(),
        json!({
            "keldysh_gamma": if gamma.value().is_finite() { json!(gamma.value()) } else { Value::Null },
            "form": match form { KeldyshForm::SquareRoot => "square_root", KeldyshForm::Squared => "squared" },
            "threshold": KELDYSH_THRESHOLD,
            "tunnelling_negligible": gamma.tunnelling_negligible(),
        }),
    );

    // collective couplings and readout
    if cfg.optical_cavity.is_some() && (cfg.ensemble.is_some() || cfg.couplings.is_some()) {
        let cav = resolve::optical_cavity(cfg)?;
        let g_o = resolve::optical_coupling(scn)?;
        let rate = ensemble_emission_rate(g_o, cav.kappa).ctx("ensemble emission rate")?;
        metrics.insert("g_optical_kHz_2pi".into(), g_o / KHZ_2PI);
        metrics.insert("kappa_optical_kHz_2pi".into(), cav.kappa / KHZ_2PI);
        metrics.insert("ensemble_rate_MHz".into(), rate / MHZ_2PI);
        let mut block = json!({
            "g_optical_kHz_2pi": g_o / KHZ_2PI,
            "kappa_optical_kHz_2pi": cav.kappa / KHZ_2PI,
            "ensemble_rate_MHz": rate / MHZ_2PI,
        });
        if let Some(r) = &cfg.readout {
            let pump = r.single_spin_pump.get(Dimension::ElectricField, "readout.single_spin_pump")?
                / onq_core::units::V_PER_ANGSTROM;
            let volume = match &r.mode_volume {
                Some(q) => q.get(Dimension::Volume, "readout.mode_volume")?,
                None => cav
                    .volume
                    .ok_or_else(|| CliError::config("missing key `optical_cavity.mode_volume`"))?,
            };
            let quality = r.quality_factor.unwrap_or(cav.omega / cav.kappa);
            let rr = single_spin_emission_rate(
                resolve::onq_coupling(cfg)?,
                pump,
                cav.omega,
                cav.relative_response,
                volume,
                quality,
            )
            .ctx("single-spin emission rate")?;
            metrics.insert("single_spin_rate_Hz".into(), rr);
            block["single_spin_rate_Hz"] = json!(rr);
        }
        out.insert("readout".into(), block);
    }
    if cfg.mw_cavity.is_some() && (cfg.ensemble.is_some() || cfg.couplings.is_some()) {
        let g_m = resolve::mw_coupling(scn)?;
        metrics.insert("g_mw_MHz_2pi".into(), g_m / MHZ_2PI);
        out.insert("microwave".into(), json!({ "g_mw_MHz_2pi": g_m / MHZ_2PI }));
    }

    if let Some(s) = &cfg.suppression {
        let r = cavity_suppression_factor(
            s.splitting.get(Dimension::Frequency, "suppression.splitting")?,
            s.kappa.get(Dimension::Frequency, "suppression.kappa")?,
        )
        .ctx("suppression factor")?;
        metrics.insert("suppression_factor".into(), r);
        out.insert("suppression".into(), json!({ "factor": r }));
    }

    if let Some(d) = &cfg.dispersive {
        let delta = d.detuning.get(Dimension::Frequency, "dispersive.detuning")?;
        let alpha = d.anharmonicity.get(Dimension::Frequency, "dispersive.anharmonicity")?;
        let e_zpf = resolve::optical_cavity(cfg)?.zero_point_electric_field()?;
        let zeta = dispersive_shift(
            resolve::onq_coupling(cfg)?,
            resolve::ensemble_size(cfg)?,
            resolve::pump_amplitude(cfg)?,
            e_zpf,
            delta,
            alpha,
        )
        .ctx("dispersive shift")?;
        metrics.insert("dispersive_shift_kHz_2pi".into(), zeta / KHZ_2PI);
        out.insert("dispersive".into(), json!({ "shift_kHz_2pi": zeta / KHZ_2PI }));
    }

    if let Some(lw) = &cfg.linewidth {
        let f = |q: &crate::units::Quantity, k: &str| q.get(Dimension::Frequency, &format!("linewidth.{k}"));
        let rep = linewidth_budget_check(
            f(&lw.rabi_frequency, "rabi_frequency")?,
            f(&lw.detuning, "detuning")?,
            f(&lw.kappa1, "kappa1")?,
            f(&lw.kappa2, "kappa2")?,
            lw.threshold.unwrap_or(DEFAULT_LINEWIDTH_THRESHOLD),
        )
        .ctx("linewidth budget")?;
        flags.push(rep.passed);
        metrics.insert("rabi_efficiency".into(), rep.efficiency);
        metrics.insert("linewidth_ok".into(), flag(rep.passed));
        out.insert(
            "linewidth".into(),
            json!({
                "efficiency": rep.efficiency,
                "threshold": rep.threshold,
                "detune_ok": rep.detune_ok,
                "kappa1_ok": rep.kappa1_ok,
                "kappa2_ok": rep.kappa2_ok,
                "pass": rep.passed,
            }),
        );
    }

    let passed = flags.iter().all(|&b| b);
    metrics.insert("passed".into(), flag(passed));
    out.insert("passed".into(), json!(passed));
    let summary = Value::Object(out);
    let files = vec![("feasibility.json".to_string(), pretty(&summary))];
    Ok(Report { summary, metrics, files })
}
