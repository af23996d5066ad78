//! Unit-tagged quantities for scenario files.
//!
//! Every physical input is written as `{ value = 0.5, unit = "MV_per_cm" }`.
//! Each unit belongs to one [`Dimension`] and converts to that dimension's
//! canonical unit, listed on the variant.

use std::fmt;

use onq_core::units::{ev_to_angular, KHZ_2PI, MHZ_2PI, GHZ_2PI, V_PER_ANGSTROM};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// rad/s
    Frequency,
    /// s
    Time,
    /// V/m
    ElectricField,
    /// V/Å²
    FieldGradient,
    /// T
    MagneticField,
    /// m³
    Volume,
    /// m²
    Area,
    /// m
    Length,
    /// barn
    QuadrupoleMoment,
    /// K
    Temperature,
    /// W/(m·K)
    ThermalConductivity,
    /// m/W
    TwoPhotonAbsorption,
    /// 2π·MHz/T
    Gyromagnetic,
    /// m⁻³
    NumberDensity,
    /// 2π·MHz/(V/Å)
    FirstOrderResponse,
    /// 2π·MHz/(V/Å)²
    SecondOrderResponse,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Frequency => "frequency/energy",
            Dimension::Time => "time",
            Dimension::ElectricField => "electric field",
            Dimension::FieldGradient => "electric field gradient",
            Dimension::MagneticField => "magnetic field",
            Dimension::Volume => "volume",
            Dimension::Area => "area",
            Dimension::Length => "length",
            Dimension::QuadrupoleMoment => "quadrupole moment",
            Dimension::Temperature => "temperature",
            Dimension::ThermalConductivity => "thermal conductivity",
            Dimension::TwoPhotonAbsorption => "two-photon absorption coefficient",
            Dimension::Gyromagnetic => "gyromagnetic ratio",
            Dimension::NumberDensity => "number density",
            Dimension::FirstOrderResponse => "first-order response",
            Dimension::SecondOrderResponse => "second-order response",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "eV")]
    Ev,
    #[serde(rename = "meV")]
    MilliEv,
    #[serde(rename = "rad_per_s")]
    RadPerS,
    #[serde(rename = "Hz_2pi")]
    Hz2Pi,
    #[serde(rename = "kHz_2pi")]
    KHz2Pi,
    #[serde(rename = "MHz_2pi")]
    MHz2Pi,
    #[serde(rename = "GHz_2pi")]
    GHz2Pi,
    #[serde(rename = "s")]
    Second,
    #[serde(rename = "ms")]
    Millisecond,
    #[serde(rename = "us")]
    Microsecond,
    #[serde(rename = "ns")]
    Nanosecond,
    #[serde(rename = "V_per_m")]
    VPerM,
    #[serde(rename = "V_per_angstrom")]
    VPerAngstrom,
    #[serde(rename = "kV_per_cm")]
    KvPerCm,
    #[serde(rename = "MV_per_cm")]
    MvPerCm,
    #[serde(rename = "V_per_angstrom2")]
    VPerAngstrom2,
    #[serde(rename = "T")]
    Tesla,
    #[serde(rename = "mT")]
    MilliTesla,
    #[serde(rename = "m3")]
    M3,
    #[serde(rename = "cm3")]
    Cm3,
    #[serde(rename = "mm3")]
    Mm3,
    #[serde(rename = "um3")]
    Um3,
    #[serde(rename = "nm3")]
    Nm3,
    #[serde(rename = "m2")]
    M2,
    #[serde(rename = "mm2")]
    Mm2,
    #[serde(rename = "um2")]
    Um2,
    #[serde(rename = "m")]
    Meter,
    #[serde(rename = "mm")]
    Millimeter,
    #[serde(rename = "um")]
    Micrometer,
    #[serde(rename = "nm")]
    Nanometer,
    #[serde(rename = "angstrom")]
    Angstrom,
    #[serde(rename = "barn")]
    Barn,
    #[serde(rename = "fm2")]
    Fm2,
    #[serde(rename = "K")]
    Kelvin,
    #[serde(rename = "mK")]
    MilliKelvin,
    #[serde(rename = "W_per_mK")]
    WPerMK,
    #[serde(rename = "m_per_W")]
    MPerW,
    #[serde(rename = "cm_per_GW")]
    CmPerGw,
    #[serde(rename = "MHz_2pi_per_T")]
    MHz2PiPerT,
    #[serde(rename = "per_m3")]
    PerM3,
    #[serde(rename = "per_cm3")]
    PerCm3,
    #[serde(rename = "MHz_2pi_per_V_per_angstrom")]
    MHz2PiPerVPerAngstrom,
    #[serde(rename = "MHz_2pi_per_V_per_angstrom2")]
    MHz2PiPerVPerAngstrom2,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            Ev | MilliEv | RadPerS | Hz2Pi | KHz2Pi | MHz2Pi | GHz2Pi => Dimension::Frequency,
            Second | Millisecond | Microsecond | Nanosecond => Dimension::Time,
            VPerM | VPerAngstrom | KvPerCm | MvPerCm => Dimension::ElectricField,
            VPerAngstrom2 => Dimension::FieldGradient,
            Tesla | MilliTesla => Dimension::MagneticField,
            M3 | Cm3 | Mm3 | Um3 | Nm3 => Dimension::Volume,
            M2 | Mm2 | Um2 => Dimension::Area,
            Meter | Millimeter | Micrometer | Nanometer | Angstrom => Dimension::Length,
            Barn | Fm2 => Dimension::QuadrupoleMoment,
            Kelvin | MilliKelvin => Dimension::Temperature,
            WPerMK => Dimension::ThermalConductivity,
            MPerW | CmPerGw => Dimension::TwoPhotonAbsorption,
            MHz2PiPerT => Dimension::Gyromagnetic,
            PerM3 | PerCm3 => Dimension::NumberDensity,
            MHz2PiPerVPerAngstrom => Dimension::FirstOrderResponse,
            MHz2PiPerVPerAngstrom2 => Dimension::SecondOrderResponse,
        }
    }

    /// Value expressed in the canonical unit of [`Unit::dimension`].
    pub fn to_canonical(self, v: f64) -> f64 {
        use Unit::*;
        match self {
            Ev => ev_to_angular(v),
            MilliEv => ev_to_angular(v * 1e-3),
            RadPerS => v,
            Hz2Pi => v * 2.0 * std::f64::consts::PI,
            KHz2Pi => v * KHZ_2PI,
            MHz2Pi => v * MHZ_2PI,
            GHz2Pi => v * GHZ_2PI,
            Second => v,
            Millisecond => v * 1e-3,
            Microsecond => v * 1e-6,
            Nanosecond => v * 1e-9,
            VPerM => v,
            VPerAngstrom => v * V_PER_ANGSTROM,
            KvPerCm => v * 1e5,
            MvPerCm => v * 1e8,
            VPerAngstrom2 => v,
            Tesla => v,
            MilliTesla => v * 1e-3,
            M3 => v,
            Cm3 => v * 1e-6,
            Mm3 => v * 1e-9,
            Um3 => v * 1e-18,
            Nm3 => v * 1e-27,
            M2 => v,
            Mm2 => v * 1e-6,
            Um2 => v * 1e-12,
            Meter => v,
            Millimeter => v * 1e-3,
            Micrometer => v * 1e-6,
            Nanometer => v * 1e-9,
            Angstrom => v * 1e-10,
            Barn => v,
            Fm2 => v * 1e-2,
            Kelvin => v,
            MilliKelvin => v * 1e-3,
            WPerMK => v,
            MPerW => v,
            CmPerGw => v * 1e-11,
            MHz2PiPerT => v,
            PerM3 => v,
            PerCm3 => v * 1e6,
            MHz2PiPerVPerAngstrom => v,
            MHz2PiPerVPerAngstrom2 => v,
        }
    }

    pub fn name(self) -> String {
        // serde_json quotes the rename; strip the quotes.
        serde_json::to_string(&self).unwrap_or_default().trim_matches('"').to_string()
    }
}

/// A number with its unit tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    /// Canonical value, or a config error naming `key` when the unit has
    /// the wrong dimension or the value is not finite.
    pub fn get(&self, expected: Dimension, key: &str) -> CliResult<f64> {
        let dim = self.unit.dimension();
        if dim != expected {
            return Err(CliError::config(format!(
                "key `{key}`: unit `{}` is a {dim}, expected a {expected}",
                self.unit.name()
            )));
        }
        if !self.value.is_finite() {
            return Err(CliError::config(format!("key `{key}`: value must be finite")));
        }
        Ok(self.unit.to_canonical(self.value))
    }
}

/// `Some(q)` → canonical value; `None` → config error naming `key`.
pub fn required(q: &Option<Quantity>, expected: Dimension, key: &str) -> CliResult<f64> {
    match q {
        Some(q) => q.get(expected, key),
        None => Err(CliError::config(format!("missing key `{key}`"))),
    }
}

/// `Some(q)` → canonical value; `None` → `default`.
pub fn optional(q: &Option<Quantity>, expected: Dimension, key: &str, default: f64) -> CliResult<f64> {
    match q {
        Some(q) => q.get(expected, key),
        None => Ok(default),
    }
}
