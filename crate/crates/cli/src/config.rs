//! Scenario files: a TOML document with one table per physical block.
//!
//! Commands pick the tables they need and report a config error naming the
//! missing key otherwise. Unknown keys are rejected everywhere.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::sweep::SweepSpec;
use crate::units::Quantity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Spin,
    Tensors,
    Simulate,
    Sweep,
    Feasibility,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Spin => "spin",
            CommandKind::Tensors => "tensors",
            CommandKind::Simulate => "simulate",
            CommandKind::Sweep => "sweep",
            CommandKind::Feasibility => "feasibility",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Command `regress` runs for this scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub species: Option<SpeciesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efg: Option<EfgConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnetic_field: Option<VectorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensors: Option<TensorsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optical_cavity: Option<CavityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mw_cavity: Option<CavityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    /// Pump laser driving the ONQ transition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump: Option<LaserConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<CouplingsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<MaterialConfig>,
    /// Field used for the heating and ionization budgets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laser: Option<LaserConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readout: Option<ReadoutConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suppression: Option<SuppressionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersive: Option<DispersiveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linewidth: Option<LinewidthConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<FeasibilityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Expectation>,
}

/// Either inline moments or a `nuclide_file` lookup by `label`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrupole_moment: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gyromagnetic: Option<Quantity>,
    /// Relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nuclide_file: Option<String>,
}

/// Symmetric EFG components; missing ones are zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfgConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xx: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yy: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zz: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xy: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xz: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yz: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorsConfig {
    /// EFG-vs-field CSV, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efg_series: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_order: Option<usize>,
    /// `x`, `y` or `z`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror_axis: Option<String>,
    /// Closed-form comparison inputs for the fitted species.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_gap: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump_photon: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bohr_radius: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub closed_form: Vec<ClosedFormEntry>,
}

/// One row of a closed-form estimate table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedFormEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    pub spin: f64,
    pub quadrupole_moment: Quantity,
    pub band_gap: Quantity,
    /// When present, the second-order estimate is reported as well.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump_photon: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bohr_radius: Option<Quantity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub frequency: Quantity,
    /// Either this or `kappa`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_volume: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_permittivity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_permeability: Option<f64>,
    /// Fock levels kept (photon numbers 0 … truncation − 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    /// N directly, or `density` × `volume`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<Quantity>,
    /// Γ_n
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relaxation: Option<Quantity>,
    /// δ
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning: Option<Quantity>,
    /// |g_o|
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub onq_coupling: Option<Quantity>,
    /// Overrides the species value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gyromagnetic: Option<Quantity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserConfig {
    pub amplitude: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub photon_energy: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linewidth: Option<Quantity>,
}

/// Direct G_o / G_m values; each one replaces the derived coupling.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optical: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mw: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    /// Absent: the default sequential swap. Empty: nothing is run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<StageConfig>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    #[serde(default)]
    pub optical: bool,
    #[serde(default)]
    pub mw: bool,
    /// Defaults to π/(2G) of the single active coupling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub band_gap: Quantity,
    pub two_photon_absorption: Quantity,
    pub thermal_conductivity: Quantity,
    pub refractive_index: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_permittivity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub depth: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<Quantity>,
}

/// Single-spin readout. The cavity defaults to `[optical_cavity]`; the
/// overrides here describe a separate small-volume cavity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutConfig {
    pub single_spin_pump: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_volume: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuppressionConfig {
    /// Δ_GE
    pub splitting: Quantity,
    pub kappa: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersiveConfig {
    pub detuning: Quantity,
    pub anharmonicity: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinewidthConfig {
    pub rabi_frequency: Quantity,
    pub detuning: Quantity,
    pub kappa1: Quantity,
    pub kappa2: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeldyshFormConfig {
    SquareRoot,
    Squared,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeasibilityConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_temperature_rise: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keldysh_form: Option<KeldyshFormConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

/// A band a reported metric must fall in, checked by `regress`.
///
/// The band is `[min, max]` when given, else `value·(1 ± rel_tol)`, else
/// `[value/factor, value·factor]`. `absolute` compares |observed|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absolute: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Expectation {
    /// Inclusive band.
    pub fn band(&self) -> CliResult<(f64, f64)> {
        if self.min.is_some() || self.max.is_some() {
            return Ok((self.min.unwrap_or(f64::NEG_INFINITY), self.max.unwrap_or(f64::INFINITY)));
        }
        let v = self
            .value
            .ok_or_else(|| CliError::config(format!("expectation `{}` needs value or min/max", self.metric)))?;
        if let Some(t) = self.rel_tol {
            let (a, b) = (v * (1.0 - t), v * (1.0 + t));
            return Ok((a.min(b), a.max(b)));
        }
        if let Some(f) = self.factor {
            if !(f >= 1.0) {
                return Err(CliError::config(format!("expectation `{}`: factor must be >= 1", self.metric)));
            }
            let (a, b) = (v / f, v * f);
            return Ok((a.min(b), a.max(b)));
        }
        let eps = 1e-12 * v.abs();
        Ok((v - eps, v + eps))
    }

    pub fn check(&self, observed: f64) -> CliResult<bool> {
        let (lo, hi) = self.band()?;
        let x = if self.absolute.unwrap_or(false) { observed.abs() } else { observed };
        Ok(x >= lo && x <= hi)
    }
}

/// A parsed scenario plus the directory its relative paths resolve from.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub base_dir: PathBuf,
}

impl Scenario {
    pub fn from_str(text: &str, base_dir: impl Into<PathBuf>) -> CliResult<Self> {
        let de = toml::de::Deserializer::parse(text).map_err(|e| CliError::config(e.to_string()))?;
        let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            CliError::config(format!("key `{key}`: {}", e.into_inner()))
        })?;
        Ok(Self { config, base_dir: base_dir.into() })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_str(&text, base).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn name(&self) -> &str {
        self.config.name.as_deref().unwrap_or("scenario")
    }
}

impl ScenarioConfig {
    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::config(e.to_string()))
    }
}

pub(crate) fn section<'a, T>(s: &'a Option<T>, name: &str) -> CliResult<&'a T> {
    s.as_ref().ok_or_else(|| CliError::config(format!("missing table `[{name}]`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_rejected() {
        let err = Scenario::from_str("[pump]\namplitude = { value = 1.0, unit = \"MV_per_cm\" }\ncolour = 3\n", ".")
            .unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn malformed_unit_names_line() {
        let err = Scenario::from_str("[pump]\namplitude = { value = 1.0, unit = \"MVcm\" }\n", ".").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") && msg.contains("MVcm") && msg.contains("pump.amplitude.unit"), "{msg}");
    }

    #[test]
    fn expectation_bands() {
        let mut e = Expectation {
            metric: "x".into(),
            value: Some(9.0),
            rel_tol: None,
            factor: Some(2.0),
            min: None,
            max: None,
            absolute: Some(true),
            note: None,
        };
        assert!(e.check(-4.5).unwrap());
        assert!(!e.check(-4.4).unwrap());
        e.factor = None;
        e.rel_tol = Some(0.05);
        assert!(e.check(9.4).unwrap() && !e.check(9.5).unwrap());
    }
}
