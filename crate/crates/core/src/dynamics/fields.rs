use crate::constants::{EPSILON_0, HBAR, MU_0};
use crate::units::{MHZ_2PI, V_PER_ANGSTROM};
use crate::{OnqError, Result};

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

/// `ℰ_zpf = √(ħω / (ε_r ε₀ V))` in V/m. `omega` in rad/s, `volume` in m³.
pub fn zero_point_electric_field(omega: f64, eps_r: f64, volume: f64) -> Result<f64> {
    positive(omega, "omega")?;
    positive(eps_r, "eps_r")?;
    positive(volume, "volume")?;
    Ok((HBAR * omega / (eps_r * EPSILON_0 * volume)).sqrt())
}

/// `ℬ_zpf = √(μ₀ μ_r ħω_m / V_m)` in T.
pub fn zero_point_magnetic_field(omega_m: f64, mu_r: f64, volume_m: f64) -> Result<f64> {
    positive(omega_m, "omega_m")?;
    positive(mu_r, "mu_r")?;
    positive(volume_m, "volume_m")?;
    Ok((MU_0 * mu_r * HBAR * omega_m / volume_m).sqrt())
}

/// `G_o = |g_o| √N ℰ_pump ℰ_zpf` in rad/s.
///
/// `g_o` in 2π·MHz/(V/Å)², `pump_field` in V/Å, `e_zpf` in V/m.
pub fn collective_optical_coupling(g_o: f64, n: f64, pump_field: f64, e_zpf: f64) -> Result<f64> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(OnqError::invalid("ensemble size N must be at least 1"));
    }
    non_negative(pump_field, "pump_field")?;
    non_negative(e_zpf, "e_zpf")?;
    if !g_o.is_finite() {
        return Err(OnqError::invalid("g_o must be finite"));
    }
    Ok(g_o.abs() * MHZ_2PI * n.sqrt() * pump_field * (e_zpf / V_PER_ANGSTROM))
}

/// `G_m = g_m √N ℬ_zpf` in rad/s. `g_m` in rad/s/T.
pub fn collective_mw_coupling(g_m: f64, n: f64, b_zpf: f64) -> Result<f64> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(OnqError::invalid("ensemble size N must be at least 1"));
    }
    non_negative(b_zpf, "b_zpf")?;
    if !g_m.is_finite() {
        return Err(OnqError::invalid("g_m must be finite"));
    }
    Ok(g_m.abs() * n.sqrt() * b_zpf)
}

/// Effective optical–microwave coupling `G_om = G_o G_m / δ` after the spins
/// are adiabatically eliminated.
pub fn adiabatic_beam_splitter_coupling(g_o: f64, g_m: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(OnqError::DivisionByZero("detuning δ is zero".into()));
    }
    if delta.abs() < 10.0 * g_o.abs().max(g_m.abs()) {
        log::warn!("δ = {delta:e} rad/s is not ≫ max(G_o, G_m); adiabatic elimination is marginal");
    }
    Ok(g_o * g_m / delta)
}

/// `ℛ = 4G_o²/κ_o`, the collective emission rate into the cavity.
pub fn ensemble_emission_rate(g_o: f64, kappa_o: f64) -> Result<f64> {
    if kappa_o == 0.0 {
        return Err(OnqError::DivisionByZero("cavity decay rate κ_o is zero".into()));
    }
    positive(kappa_o, "kappa_o")?;
    Ok(4.0 * g_o * g_o / kappa_o)
}

/// `r = κ_o² / (4Δ_GE² + κ_o²)`.
pub fn cavity_suppression_factor(delta_ge: f64, kappa_o: f64) -> Result<f64> {
    non_negative(delta_ge, "delta_GE")?;
    non_negative(kappa_o, "kappa_o")?;
    if delta_ge == 0.0 && kappa_o == 0.0 {
        return Err(OnqError::invalid("Δ_GE and κ_o cannot both be zero"));
    }
    Ok(kappa_o * kappa_o / (4.0 * delta_ge * delta_ge + kappa_o * kappa_o))
}

/// A single cavity mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonicMode {
    /// rad/s
    pub angular_frequency: f64,
    /// Fock-space truncation (number of levels).
    pub truncation_dim: usize,
    /// Energy decay rate, rad/s.
    pub kappa: f64,
    /// m³
    pub mode_volume: f64,
    /// ε_r for optical modes, μ_r for microwave modes.
    pub relative_response: f64,
}

impl BosonicMode {
    /// Mode with `κ = ω/Q`.
    pub fn from_quality_factor(
        angular_frequency: f64,
        quality_factor: f64,
        truncation_dim: usize,
        mode_volume: f64,
        relative_response: f64,
    ) -> Result<Self> {
        positive(quality_factor, "quality factor")?;
        Self::with_kappa(angular_frequency, angular_frequency / quality_factor, truncation_dim, mode_volume, relative_response)
    }

    pub fn with_kappa(
        angular_frequency: f64,
        kappa: f64,
        truncation_dim: usize,
        mode_volume: f64,
        relative_response: f64,
    ) -> Result<Self> {
        positive(angular_frequency, "mode frequency")?;
        non_negative(kappa, "kappa")?;
        positive(mode_volume, "mode volume")?;
        positive(relative_response, "relative permittivity/permeability")?;
        if truncation_dim < 2 {
            return Err(OnqError::invalid("truncation_dim must be at least 2"));
        }
        Ok(Self { angular_frequency, truncation_dim, kappa, mode_volume, relative_response })
    }

    pub fn quality_factor(&self) -> f64 {
        self.angular_frequency / self.kappa
    }

    /// Treating the mode as optical: ℰ_zpf in V/m.
    pub fn zero_point_electric_field(&self) -> Result<f64> {
        zero_point_electric_field(self.angular_frequency, self.relative_response, self.mode_volume)
    }

    /// Treating the mode as microwave: ℬ_zpf in T.
    pub fn zero_point_magnetic_field(&self) -> Result<f64> {
        zero_point_magnetic_field(self.angular_frequency, self.relative_response, self.mode_volume)
    }
}

/// The ensemble's collective |G⟩ ↔ |E⟩ transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveSpinMode {
    /// Δ_ge, rad/s.
    pub splitting_delta_ge: f64,
    /// δ = |ω_m − Δ_ge|, rad/s.
    pub detuning_delta: f64,
    /// Γ_n, rad/s.
    pub relaxation_gamma_n: f64,
    pub ensemble_size_n: f64,
    /// |g_o|, 2π·MHz/(V/Å)².
    pub g_o: f64,
    /// g_m, rad/s/T.
    pub g_m: f64,
}

impl CollectiveSpinMode {
    pub fn new(
        splitting_delta_ge: f64,
        detuning_delta: f64,
        relaxation_gamma_n: f64,
        ensemble_size_n: f64,
        g_o: f64,
        g_m: f64,
    ) -> Result<Self> {
        if !(ensemble_size_n >= 1.0 && ensemble_size_n.is_finite()) {
            return Err(OnqError::invalid("ensemble size N must be at least 1"));
        }
        non_negative(relaxation_gamma_n, "Γ_n")?;
        for (x, name) in [(splitting_delta_ge, "Δ_ge"), (detuning_delta, "δ"), (g_o, "g_o"), (g_m, "g_m")] {
            if !x.is_finite() {
                return Err(OnqError::invalid(format!("{name} must be finite")));
            }
        }
        Ok(Self { splitting_delta_ge, detuning_delta, relaxation_gamma_n, ensemble_size_n, g_o, g_m })
    }

    /// G_o for a pump amplitude in V/Å and the optical mode's zero-point field.
    pub fn optical_coupling(&self, pump_field: f64, optical: &BosonicMode) -> Result<f64> {
        collective_optical_coupling(self.g_o, self.ensemble_size_n, pump_field, optical.zero_point_electric_field()?)
    }

    pub fn mw_coupling(&self, mw: &BosonicMode) -> Result<f64> {
        collective_mw_coupling(self.g_m, self.ensemble_size_n, mw.zero_point_magnetic_field()?)
    }
}
