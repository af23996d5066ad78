//! Nuclear-spin algebra: angular-momentum operators, the static Zeeman +
//! quadrupole Hamiltonian, its level structure, and the two-photon ONQ
//! matrix element `g_o`.

mod hamiltonian;
mod levels;
mod nuclide_file;
mod operators;

use nalgebra::{Matrix3, SymmetricEigen};

use crate::constants::{ELEMENTARY_CHARGE, HBAR, PLANCK};
use crate::units::{BARN, MHZ_2PI, V_PER_ANGSTROM2};
use crate::{OnqError, Result};

pub use hamiltonian::{onq_coupling_strength, single_spin_rabi_frequency, static_hamiltonian};
pub use levels::{spin_levels, SpinLevelStructure};
pub use nuclide_file::{read_nuclide_file, write_nuclide_file};
pub use operators::{spin_operators, SpinOperators, MAX_TWICE_SPIN};

/// Identity and static nuclear moments of one isotope.
#[derive(Debug, Clone, PartialEq)]
pub struct NuclearSpecies {
    pub label: String,
    /// Angular momentum quantum number I (half-integer).
    pub spin_i: f64,
    /// Electric quadrupole moment, barn. May be negative.
    pub quadrupole_moment_barn: f64,
    /// Gyromagnetic ratio, 2π·MHz/T.
    pub gyromagnetic_mhz_2pi_per_t: f64,
}

impl NuclearSpecies {
    pub fn new(
        label: impl Into<String>,
        spin_i: f64,
        quadrupole_moment_barn: f64,
        gyromagnetic_mhz_2pi_per_t: f64,
    ) -> Result<Self> {
        twice_spin(spin_i)?;
        if !quadrupole_moment_barn.is_finite() || !gyromagnetic_mhz_2pi_per_t.is_finite() {
            return Err(OnqError::invalid("nuclear moments must be finite"));
        }
        Ok(Self {
            label: label.into(),
            spin_i,
            quadrupole_moment_barn,
            gyromagnetic_mhz_2pi_per_t,
        })
    }

    /// Hilbert-space dimension 2I + 1.
    pub fn dim(&self) -> usize {
        (2.0 * self.spin_i).round() as usize + 1
    }

    /// Gyromagnetic ratio in rad/s/T.
    pub fn gyromagnetic_rad_per_s_t(&self) -> f64 {
        self.gyromagnetic_mhz_2pi_per_t * MHZ_2PI
    }

    /// Quadrupole moment in m².
    pub fn quadrupole_moment_m2(&self) -> f64 {
        self.quadrupole_moment_barn * BARN
    }

    /// The spin normalisation 2I(2I − 1), or `SpinTooSmall` for I = 1/2.
    pub fn quadrupole_normalization(&self) -> Result<f64> {
        if self.spin_i <= 0.5 {
            return Err(OnqError::SpinTooSmall { spin: self.spin_i });
        }
        Ok(2.0 * self.spin_i * (2.0 * self.spin_i - 1.0))
    }

    /// `e·q / (2I(2I−1)ħ)`: converts an EFG in V/Å² to a quadrupole-tensor
    /// entry in rad/s. Also converts EFG field derivatives into `C`/`D`
    /// entries.
    pub fn efg_to_angular(&self) -> Result<f64> {
        let norm = self.quadrupole_normalization()?;
        Ok(ELEMENTARY_CHARGE * self.quadrupole_moment_m2() * V_PER_ANGSTROM2 / (HBAR * norm))
    }
}

/// Validates a half-integer spin and returns 2I.
pub(crate) fn twice_spin(spin_i: f64) -> Result<usize> {
    let twice = 2.0 * spin_i;
    if !spin_i.is_finite() || spin_i <= 0.0 || (twice - twice.round()).abs() > 1e-9 {
        return Err(OnqError::invalid(format!(
            "spin I = {spin_i} is not a positive half-integer"
        )));
    }
    let twice = twice.round() as usize;
    if twice > MAX_TWICE_SPIN {
        return Err(OnqError::invalid(format!(
            "spin I = {spin_i} exceeds the supported maximum 9/2"
        )));
    }
    Ok(twice)
}

/// Electric field gradient at a nuclear site, V/Å². Symmetric and traceless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfgTensor {
    v: Matrix3<f64>,
}

impl EfgTensor {
    pub fn zero() -> Self {
        Self { v: Matrix3::zeros() }
    }

    /// Builds the tensor from its six independent components.
    pub fn from_components(xx: f64, yy: f64, zz: f64, xy: f64, xz: f64, yz: f64) -> Result<Self> {
        let v = Matrix3::new(xx, xy, xz, xy, yy, yz, xz, yz, zz);
        Self::from_matrix(v)
    }

    pub fn from_matrix(v: Matrix3<f64>) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(OnqError::invalid("EFG tensor has non-finite entries"));
        }
        let scale = v.amax();
        if (v - v.transpose()).amax() > 1e-12 * scale {
            return Err(OnqError::invalid("EFG tensor is not symmetric"));
        }
        if v.trace().abs() > 1e-9 * scale {
            return Err(OnqError::invalid(format!(
                "EFG tensor is not traceless (trace {:e} V/Å²)",
                v.trace()
            )));
        }
        // exact symmetry from here on
        let v = (v + v.transpose()) * 0.5;
        Ok(Self { v })
    }

    /// Axially symmetric tensor with V_xx = V_yy = −V_zz/2.
    pub fn axial(vzz: f64) -> Self {
        Self {
            v: Matrix3::from_diagonal(&nalgebra::Vector3::new(-vzz / 2.0, -vzz / 2.0, vzz)),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.v
    }

    /// Principal value of largest magnitude (V_zz by convention).
    pub fn vzz(&self) -> f64 {
        let eig = SymmetricEigen::new(self.v);
        eig.eigenvalues
            .iter()
            .copied()
            .fold(0.0, |acc: f64, x| if x.abs() > acc.abs() { x } else { acc })
    }

    /// Asymmetry parameter η = (V_xx − V_yy)/V_zz in the principal frame,
    /// with |V_zz| ≥ |V_yy| ≥ |V_xx|.
    pub fn asymmetry(&self) -> f64 {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.v).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        if ev[2] == 0.0 {
            0.0
        } else {
            (ev[0] - ev[1]) / ev[2]
        }
    }
}

/// Quadrupole coupling tensor Q_ij in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrupoleTensor {
    q: Matrix3<f64>,
}

impl QuadrupoleTensor {
    /// The vanishing tensor (always the case for I = 1/2).
    pub fn zero() -> Self {
        Self { q: Matrix3::zeros() }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.q
    }

    /// Entries in 2π·MHz.
    pub fn in_mhz_2pi(&self) -> Matrix3<f64> {
        self.q / MHZ_2PI
    }
}

/// `Q_ij = e·q·V_ij / (2I(2I−1))`, returned in rad/s.
pub fn quadrupole_tensor(species: &NuclearSpecies, efg: &EfgTensor) -> Result<QuadrupoleTensor> {
    let k = species.efg_to_angular()?;
    Ok(QuadrupoleTensor { q: efg.v * k })
}

/// Quadrupole coupling constant `C_q = e·q·V_zz / h` in Hz.
///
/// The sign follows `q·V_zz`. Defined for every spin; for I = 1/2 it is
/// simply the energy scale the moment would have.
pub fn quadrupole_coupling_constant(species: &NuclearSpecies, efg: &EfgTensor) -> f64 {
    ELEMENTARY_CHARGE * species.quadrupole_moment_m2() * efg.vzz() * V_PER_ANGSTROM2 / PLANCK
}
