//! Builds library inputs from scenario tables.

use std::f64::consts::FRAC_PI_2;
use std::fs::File;

use nalgebra::Vector3;
use onq_core::dynamics::{
    collective_mw_coupling, collective_optical_coupling, zero_point_electric_field, zero_point_magnetic_field,
    EvolveOptions, ProtocolSchedule, ProtocolStage, TransductionParams, DEFAULT_FOCK_DIM,
};
use onq_core::spin::{read_nuclide_file, EfgTensor, NuclearSpecies};
use onq_core::units::{MHZ_2PI, V_PER_ANGSTROM};

use crate::config::{section, CavityConfig, Scenario, ScenarioConfig};
use crate::error::{CliError, CliResult, Context};
use crate::units::{optional, required, Dimension};

pub fn species(scn: &Scenario) -> CliResult<NuclearSpecies> {
    let sp = section(&scn.config.species, "species")?;
    if let Some(file) = &sp.nuclide_file {
        if sp.spin.is_some() || sp.quadrupole_moment.is_some() || sp.gyromagnetic.is_some() {
            return Err(CliError::config("species: give either `nuclide_file` or inline moments, not both"));
        }
        let path = scn.resolve(file);
        let f = File::open(&path).map_err(|e| CliError::io(&path, e))?;
        let all = read_nuclide_file(f).ctx(&path.display().to_string())?;
        return all.into_iter().find(|s| s.label == sp.label).ok_or_else(|| {
            CliError::config(format!("species `{}` not found in {}", sp.label, path.display()))
        });
    }
    let spin = sp.spin.ok_or_else(|| CliError::config("missing key `species.spin`"))?;
    let q = required(&sp.quadrupole_moment, Dimension::QuadrupoleMoment, "species.quadrupole_moment")?;
    let g = optional(&sp.gyromagnetic, Dimension::Gyromagnetic, "species.gyromagnetic", 0.0)?;
    NuclearSpecies::new(sp.label.clone(), spin, q, g).ctx("species")
}

pub fn efg(cfg: &ScenarioConfig) -> CliResult<EfgTensor> {
    let e = section(&cfg.efg, "efg")?;
    let c = |q, name: &str| optional(q, Dimension::FieldGradient, &format!("efg.{name}"), 0.0);
    EfgTensor::from_components(
        c(&e.xx, "xx")?,
        c(&e.yy, "yy")?,
        c(&e.zz, "zz")?,
        c(&e.xy, "xy")?,
        c(&e.xz, "xz")?,
        c(&e.yz, "yz")?,
    )
    .ctx("efg")
}

/// Tesla; zero when the table is absent.
pub fn magnetic_field(cfg: &ScenarioConfig) -> CliResult<Vector3<f64>> {
    let Some(b) = &cfg.magnetic_field else {
        return Ok(Vector3::zeros());
    };
    let c = |q, name: &str| optional(q, Dimension::MagneticField, &format!("magnetic_field.{name}"), 0.0);
    Ok(Vector3::new(c(&b.x, "x")?, c(&b.y, "y")?, c(&b.z, "z")?))
}

/// A cavity table in canonical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cavity {
    /// rad/s
    pub omega: f64,
    /// rad/s
    pub kappa: f64,
    /// m³
    pub volume: Option<f64>,
    pub relative_response: f64,
    pub dim: usize,
}

pub fn cavity(c: &CavityConfig, name: &str, optical: bool) -> CliResult<Cavity> {
    let omega = c.frequency.get(Dimension::Frequency, &format!("{name}.frequency"))?;
    if !(omega > 0.0) {
        return Err(CliError::config(format!("key `{name}.frequency` must be positive")));
    }
    let kappa = match (c.quality_factor, &c.kappa) {
        (Some(q), None) if q > 0.0 => omega / q,
        (Some(_), None) => return Err(CliError::config(format!("key `{name}.quality_factor` must be positive"))),
        (None, Some(k)) => k.get(Dimension::Frequency, &format!("{name}.kappa"))?,
        (None, None) => return Err(CliError::config(format!("`[{name}]` needs `quality_factor` or `kappa`"))),
        (Some(_), Some(_)) => {
            return Err(CliError::config(format!("`[{name}]`: give `quality_factor` or `kappa`, not both")))
        }
    };
    if kappa < 0.0 {
        return Err(CliError::config(format!("key `{name}.kappa` must be non-negative")));
    }
    let volume = c
        .mode_volume
        .map(|v| v.get(Dimension::Volume, &format!("{name}.mode_volume")))
        .transpose()?;
    let (wanted, other) = if optical {
        (c.relative_permittivity, c.relative_permeability.map(|_| "relative_permeability"))
    } else {
        (c.relative_permeability, c.relative_permittivity.map(|_| "relative_permittivity"))
    };
    if let Some(k) = other {
        return Err(CliError::config(format!("key `{name}.{k}` does not apply to this cavity")));
    }
    let dim = c.truncation.unwrap_or(DEFAULT_FOCK_DIM);
    if dim < 2 {
        return Err(CliError::config(format!("key `{name}.truncation` must be at least 2")));
    }
    Ok(Cavity { omega, kappa, volume, relative_response: wanted.unwrap_or(1.0), dim })
}

impl Cavity {
    fn volume(&self, name: &str) -> CliResult<f64> {
        self.volume.ok_or_else(|| CliError::config(format!("missing key `{name}.mode_volume`")))
    }

    /// V/m
    pub fn zero_point_electric_field(&self) -> CliResult<f64> {
        zero_point_electric_field(self.omega, self.relative_response, self.volume("optical_cavity")?)
            .ctx("optical_cavity")
    }

    /// T
    pub fn zero_point_magnetic_field(&self) -> CliResult<f64> {
        zero_point_magnetic_field(self.omega, self.relative_response, self.volume("mw_cavity")?).ctx("mw_cavity")
    }
}

pub fn optical_cavity(cfg: &ScenarioConfig) -> CliResult<Cavity> {
    cavity(section(&cfg.optical_cavity, "optical_cavity")?, "optical_cavity", true)
}

pub fn mw_cavity(cfg: &ScenarioConfig) -> CliResult<Cavity> {
    cavity(section(&cfg.mw_cavity, "mw_cavity")?, "mw_cavity", false)
}

/// N from `size`, or `density × volume`.
pub fn ensemble_size(cfg: &ScenarioConfig) -> CliResult<f64> {
    let e = section(&cfg.ensemble, "ensemble")?;
    let n = match (e.size, &e.density) {
        (Some(n), None) => n,
        (None, Some(_)) => {
            let rho = required(&e.density, Dimension::NumberDensity, "ensemble.density")?;
            rho * required(&e.volume, Dimension::Volume, "ensemble.volume")?
        }
        (Some(_), Some(_)) => return Err(CliError::config("ensemble: give `size` or `density`, not both")),
        (None, None) => return Err(CliError::config("ensemble: missing `size` or `density`")),
    };
    if !(n >= 1.0 && n.is_finite()) {
        return Err(CliError::config("ensemble size must be at least 1"));
    }
    Ok(n)
}

/// |g_o| in 2π·MHz/(V/Å)².
pub fn onq_coupling(cfg: &ScenarioConfig) -> CliResult<f64> {
    let e = section(&cfg.ensemble, "ensemble")?;
    required(&e.onq_coupling, Dimension::SecondOrderResponse, "ensemble.onq_coupling")
}

/// Pump amplitude in V/Å.
pub fn pump_amplitude(cfg: &ScenarioConfig) -> CliResult<f64> {
    let p = section(&cfg.pump, "pump")?;
    Ok(p.amplitude.get(Dimension::ElectricField, "pump.amplitude")? / V_PER_ANGSTROM)
}

/// G_o in rad/s, from `[couplings]` or derived from the ensemble, pump and
/// optical cavity.
pub fn optical_coupling(scn: &Scenario) -> CliResult<f64> {
    let cfg = &scn.config;
    if let Some(q) = cfg.couplings.as_ref().and_then(|c| c.optical) {
        return q.get(Dimension::Frequency, "couplings.optical");
    }
    let e_zpf = optical_cavity(cfg)?.zero_point_electric_field()?;
    collective_optical_coupling(onq_coupling(cfg)?, ensemble_size(cfg)?, pump_amplitude(cfg)?, e_zpf).ctx("G_o")
}

/// G_m in rad/s, from `[couplings]` or derived from g_m, N and the
/// microwave cavity.
pub fn mw_coupling(scn: &Scenario) -> CliResult<f64> {
    let cfg = &scn.config;
    if let Some(q) = cfg.couplings.as_ref().and_then(|c| c.mw) {
        return q.get(Dimension::Frequency, "couplings.mw");
    }
    let g_m = match cfg.ensemble.as_ref().and_then(|e| e.gyromagnetic) {
        Some(q) => q.get(Dimension::Gyromagnetic, "ensemble.gyromagnetic")?,
        None => species(scn)?.gyromagnetic_mhz_2pi_per_t,
    } * MHZ_2PI;
    let b_zpf = mw_cavity(cfg)?.zero_point_magnetic_field()?;
    collective_mw_coupling(g_m, ensemble_size(cfg)?, b_zpf).ctx("G_m")
}

/// Everything a swap-protocol run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Transduction {
    pub params: TransductionParams,
    /// `None` selects the default sequential swap.
    pub schedule: Option<ProtocolSchedule>,
    pub options: EvolveOptions,
}

pub fn transduction(scn: &Scenario, stride_override: Option<usize>) -> CliResult<Transduction> {
    let cfg = &scn.config;
    let optical = optical_cavity(cfg)?;
    let mw = mw_cavity(cfg)?;
    let g_optical = optical_coupling(scn)?;
    let g_mw = mw_coupling(scn)?;
    let (gamma_n, delta) = match &cfg.ensemble {
        Some(e) => (
            optional(&e.relaxation, Dimension::Frequency, "ensemble.relaxation", 0.0)?,
            optional(&e.detuning, Dimension::Frequency, "ensemble.detuning", 0.0)?,
        ),
        None => (0.0, 0.0),
    };
    let params = TransductionParams {
        g_optical,
        g_mw,
        delta,
        kappa_optical: optical.kappa,
        kappa_mw: mw.kappa,
        gamma_n,
        optical_dim: optical.dim,
        mw_dim: mw.dim,
    };
    params.validate().ctx("transduction parameters")?;

    let schedule = match cfg.protocol.as_ref().and_then(|p| p.stages.as_ref()) {
        None => None,
        Some(stages) => {
            let mut out = Vec::with_capacity(stages.len());
            for (k, s) in stages.iter().enumerate() {
                let key = format!("protocol.stages.{k}.duration");
                let duration = match (&s.duration, s.optical, s.mw) {
                    (Some(d), _, _) => d.get(Dimension::Time, &key)?,
                    (None, true, false) if g_optical != 0.0 => FRAC_PI_2 / g_optical.abs(),
                    (None, false, true) if g_mw != 0.0 => FRAC_PI_2 / g_mw.abs(),
                    _ => {
                        return Err(CliError::config(format!(
                            "missing key `{key}` (no default for this gate combination)"
                        )))
                    }
                };
                out.push(ProtocolStage { duration, optical_on: s.optical, mw_on: s.mw });
            }
            Some(ProtocolSchedule::new(out).ctx("protocol")?)
        }
    };

    let integ = cfg.integrator.clone().unwrap_or_default();
    let dt = integ.dt.map(|q| q.get(Dimension::Time, "integrator.dt")).transpose()?;
    if let Some(dt) = dt {
        if !(dt > 0.0) {
            return Err(CliError::config("key `integrator.dt` must be positive"));
        }
    }
    let stride = stride_override.or(integ.stride).unwrap_or(1);
    if stride == 0 {
        return Err(CliError::config("stride must be at least 1"));
    }
    Ok(Transduction { params, schedule, options: EvolveOptions { dt, stride, diagnostics: true } })
}
