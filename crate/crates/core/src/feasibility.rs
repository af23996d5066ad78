//! Laser heating, ionization, cavity readout and linewidth budgets.

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, EPSILON_0, SPEED_OF_LIGHT};
use crate::dynamics::{collective_optical_coupling, zero_point_electric_field};
use crate::units::{EV, MHZ_2PI, V_PER_ANGSTROM};
use crate::{OnqError, Result};

/// Keldysh parameter above which tunnelling ionization is negligible.
pub const KELDYSH_THRESHOLD: f64 = 1.5;
/// Default linewidth-budget threshold factor (inclusive).
pub const DEFAULT_LINEWIDTH_THRESHOLD: f64 = 1.0;

fn positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(OnqError::invalid(format!("{name} must be positive and finite")))
    }
}

fn non_negative(x: f64, name: &str) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(OnqError::invalid(format!("{name} must be non-negative and finite")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialOptics {
    /// eV
    pub bandgap_eg: f64,
    /// Two-photon absorption coefficient, m/W.
    pub two_photon_beta: f64,
    /// W/(m·K)
    pub thermal_conductivity: f64,
    pub refractive_index: f64,
    pub relative_permittivity: f64,
}

impl MaterialOptics {
    pub fn new(
        bandgap_eg: f64,
        two_photon_beta: f64,
        thermal_conductivity: f64,
        refractive_index: f64,
        relative_permittivity: f64,
    ) -> Result<Self> {
        positive(bandgap_eg, "bandgap")?;
        positive(two_photon_beta, "β")?;
        positive(thermal_conductivity, "thermal conductivity")?;
        positive(refractive_index, "refractive index")?;
        positive(relative_permittivity, "relative permittivity")?;
        Ok(Self { bandgap_eg, two_photon_beta, thermal_conductivity, refractive_index, relative_permittivity })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserField {
    /// V/m
    pub amplitude: f64,
    /// rad/s
    pub angular_frequency: f64,
    /// rad/s
    pub linewidth: f64,
}

impl LaserField {
    pub fn new(amplitude: f64, angular_frequency: f64, linewidth: f64) -> Result<Self> {
        non_negative(amplitude, "field amplitude")?;
        positive(angular_frequency, "angular frequency")?;
        non_negative(linewidth, "linewidth")?;
        Ok(Self { amplitude, angular_frequency, linewidth })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGeometry {
    /// m
    pub depth: f64,
    /// m²
    pub transverse_area: f64,
}

impl SampleGeometry {
    pub fn new(depth: f64, transverse_area: f64) -> Result<Self> {
        non_negative(depth, "depth")?;
        positive(transverse_area, "transverse area")?;
        Ok(Self { depth, transverse_area })
    }
}

/// `P_in = ½ c₀ ε₀ ℰ²`, W/m².
pub fn incident_power_density(field: &LaserField) -> f64 {
    0.5 * SPEED_OF_LIGHT * EPSILON_0 * field.amplitude * field.amplitude
}

/// Two-photon absorption length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PenetrationDepth {
    /// m
    Finite(f64),
    /// No field, no absorption.
    Infinite,
}

impl PenetrationDepth {
    /// Depth in m (`f64::INFINITY` for the unabsorbed case).
    pub fn meters(self) -> f64 {
        match self {
            PenetrationDepth::Finite(d) => d,
            PenetrationDepth::Infinite => f64::INFINITY,
        }
    }
}

/// `d_p = 1/(β P_in)`.
pub fn two_photon_penetration_depth(mat: &MaterialOptics, field: &LaserField) -> PenetrationDepth {
    let p_in = incident_power_density(field);
    if p_in == 0.0 {
        PenetrationDepth::Infinite
    } else {
        PenetrationDepth::Finite(1.0 / (mat.two_photon_beta * p_in))
    }
}

/// Absorbed power per unit area, W/m².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorbedPower {
    /// `P_in (1 − e^{−d/d_p})`
    pub exact: f64,
    /// `P_in d/d_p`
    pub linearized: f64,
}

pub fn absorbed_power_density(p_in: f64, geom: &SampleGeometry, d_p: PenetrationDepth) -> Result<AbsorbedPower> {
    non_negative(p_in, "P_in")?;
    match d_p {
        PenetrationDepth::Infinite => Ok(AbsorbedPower { exact: 0.0, linearized: 0.0 }),
        PenetrationDepth::Finite(dp) => {
            positive(dp, "penetration depth")?;
            let x = geom.depth / dp;
            Ok(AbsorbedPower { exact: -p_in * (-x).exp_m1(), linearized: p_in * x })
        }
    }
}

/// `ΔT = P_abs d / k_th` with the linearized absorption, K.
pub fn temperature_rise(mat: &MaterialOptics, field: &LaserField, geom: &SampleGeometry) -> f64 {
    let p_in = incident_power_density(field);
    let d_p = two_photon_penetration_depth(mat, field);
    match absorbed_power_density(p_in, geom, d_p) {
        Ok(p) => p.linearized * geom.depth / mat.thermal_conductivity,
        Err(_) => 0.0,
    }
}

/// Which algebraic form of the Keldysh parameter to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeldyshForm {
    /// `(ω/e) √(m c n ε₀ E_g / P_in)`
    #[default]
    SquareRoot,
    /// The same bracket squared instead of square-rooted. Kept for comparison
    /// only; it does not reproduce γ ∼ 10².
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KeldyshParameter {
    Finite(f64),
    /// Zero field: no tunnelling at all.
    Infinite,
}

impl KeldyshParameter {
    pub fn value(self) -> f64 {
        match self {
            KeldyshParameter::Finite(g) => g,
            KeldyshParameter::Infinite => f64::INFINITY,
        }
    }

    /// γ ≥ 1.5: multiphoton regime, tunnelling ionization negligible.
    pub fn tunnelling_negligible(self) -> bool {
        self.value() >= KELDYSH_THRESHOLD
    }
}

/// Keldysh parameter with the free-electron mass.
pub fn keldysh_parameter(mat: &MaterialOptics, field: &LaserField, form: KeldyshForm) -> KeldyshParameter {
    let p_in = incident_power_density(field);
    if p_in == 0.0 {
        return KeldyshParameter::Infinite;
    }
    let bracket = ELECTRON_MASS * SPEED_OF_LIGHT * mat.refractive_index * EPSILON_0 * mat.bandgap_eg * EV / p_in;
    let pre = field.angular_frequency / ELEMENTARY_CHARGE;
    KeldyshParameter::Finite(match form {
        KeldyshForm::SquareRoot => pre * bracket.sqrt(),
        KeldyshForm::Squared => pre * bracket * bracket,
    })
}

/// Single-spin cavity emission rate `R = 2[g_o ℰ ℰ_zpf]²/κ` with `κ = ω/Q`,
/// returned as R/2π in Hz.
///
/// `g_o` in 2π·MHz/(V/Å)², `pump_field` in V/Å, `omega_o1` in rad/s,
/// `mode_volume` in m³.
pub fn single_spin_emission_rate(
    g_o: f64,
    pump_field: f64,
    omega_o1: f64,
    eps_r: f64,
    mode_volume: f64,
    quality_factor: f64,
) -> Result<f64> {
    non_negative(pump_field, "pump field")?;
    positive(quality_factor, "quality factor")?;
    let e_zpf = zero_point_electric_field(omega_o1, eps_r, mode_volume)? / V_PER_ANGSTROM;
    let coupling = g_o.abs() * MHZ_2PI * pump_field * e_zpf;
    let kappa = omega_o1 / quality_factor;
    Ok(2.0 * coupling * coupling / kappa / (2.0 * std::f64::consts::PI))
}

/// Dispersive cavity shift `ζ = (2G²/δ)/(1 + δ/α)` with
/// `G = g_o √N ℰ ℰ_zpf`, rad/s.
pub fn dispersive_shift(g_o: f64, n: f64, pump_field: f64, e_zpf: f64, delta: f64, alpha: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(OnqError::DivisionByZero("detuning δ is zero".into()));
    }
    positive(alpha, "anharmonicity α")?;
    let g = collective_optical_coupling(g_o, n, pump_field, e_zpf)?;
    Ok(2.0 * g * g / delta / (1.0 + delta / alpha))
}

/// `η₀ = f(f + κ₁ + κ₂) / (Δ² + (f + κ₁ + κ₂)²)`; zero without drive.
pub fn rabi_efficiency(f_rabi: f64, detune: f64, kappa1: f64, kappa2: f64) -> Result<f64> {
    non_negative(f_rabi, "Rabi frequency")?;
    non_negative(kappa1, "κ₁")?;
    non_negative(kappa2, "κ₂")?;
    if !detune.is_finite() {
        return Err(OnqError::invalid("detuning must be finite"));
    }
    if f_rabi == 0.0 {
        return Ok(0.0);
    }
    let s = f_rabi + kappa1 + kappa2;
    Ok(f_rabi * s / (detune * detune + s * s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinewidthReport {
    pub efficiency: f64,
    pub threshold: f64,
    pub detune_ok: bool,
    pub kappa1_ok: bool,
    pub kappa2_ok: bool,
    pub passed: bool,
}

/// Passes when |Δ|, κ₁ and κ₂ are each at most `threshold · f` (inclusive).
pub fn linewidth_budget_check(
    f_rabi: f64,
    detune: f64,
    kappa1: f64,
    kappa2: f64,
    threshold: f64,
) -> Result<LinewidthReport> {
    positive(threshold, "threshold")?;
    let efficiency = rabi_efficiency(f_rabi, detune, kappa1, kappa2)?;
    let limit = threshold * f_rabi;
    let detune_ok = detune.abs() <= limit;
    let kappa1_ok = kappa1 <= limit;
    let kappa2_ok = kappa2 <= limit;
    Ok(LinewidthReport {
        efficiency,
        threshold,
        detune_ok,
        kappa1_ok,
        kappa2_ok,
        passed: detune_ok && kappa1_ok && kappa2_ok,
    })
}
