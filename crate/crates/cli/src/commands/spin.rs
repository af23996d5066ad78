use onq_core::spin::{
    quadrupole_coupling_constant, quadrupole_tensor, spin_levels, spin_operators, static_hamiltonian,
    QuadrupoleTensor,
};
use onq_core::units::MHZ_2PI;
use serde_json::json;

use super::{pretty, Report};
use crate::config::Scenario;
use crate::error::{CliResult, Context};
use crate::resolve;

const NO_QUADRUPOLE: &str = "I = 1/2: no quadrupole structure; levels are Zeeman only";

/// Level structure of the static Zeeman + quadrupole Hamiltonian.
///
/// Energies and Δ_ge are in 2π·MHz, C_q in MHz.
pub fn spin(scn: &Scenario) -> CliResult<Report> {
    let sp = resolve::species(scn)?;
    let efg = resolve::efg(&scn.config)?;
    let b = resolve::magnetic_field(&scn.config)?;
    let ops = spin_operators(sp.spin_i).ctx("spin operators")?;

    let mut notices = Vec::new();
    let quad = if sp.spin_i > 0.5 {
        quadrupole_tensor(&sp, &efg).ctx("quadrupole tensor")?
    } else {
        log::warn!("{NO_QUADRUPOLE}");
        notices.push(NO_QUADRUPOLE);
        QuadrupoleTensor::zero()
    };
    let h = static_hamiltonian(&sp, &b, &quad, &ops).ctx("Hamiltonian")?;
    let levels = spin_levels(&h).ctx("diagonalisation")?;

    let energies: Vec<f64> = levels.energies().iter().map(|e| e / MHZ_2PI).collect();
    let distinct: Vec<_> = levels
        .distinct_levels()
        .into_iter()
        .map(|(e, n)| json!({ "energy_MHz_2pi": e / MHZ_2PI, "degeneracy": n }))
        .collect();
    let delta_ge = levels.first_excited_index().map(|e| levels.splitting(0, e) / MHZ_2PI);
    let cq_mhz = if sp.spin_i > 0.5 { Some(quadrupole_coupling_constant(&sp, &efg) / 1e6) } else { None };

    let mut metrics = std::collections::BTreeMap::new();
    for (k, e) in energies.iter().enumerate() {
        metrics.insert(format!("energy.{k}"), *e);
    }
    metrics.insert("delta_ge_MHz_2pi".into(), delta_ge.unwrap_or(0.0));
    if let Some(cq) = cq_mhz {
        metrics.insert("cq_MHz".into(), cq);
    }
    metrics.insert("asymmetry".into(), efg.asymmetry());

    let summary = json!({
        "command": "spin",
        "species": sp.label,
        "spin_I": sp.spin_i,
        "energies_MHz_2pi": energies,
        "levels": distinct,
        "delta_ge_MHz_2pi": delta_ge,
        "cq_MHz": cq_mhz,
        "asymmetry": efg.asymmetry(),
        "quadrupole_tensor_MHz_2pi": (0..3)
            .map(|i| (0..3).map(|j| quad.in_mhz_2pi()[(i, j)]).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "notices": notices,
    });
    let files = vec![("spin.json".to_string(), pretty(&summary))];
    Ok(Report { summary, metrics, files })
}
