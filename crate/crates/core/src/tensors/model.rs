use crate::{CMatrix, OnqError, Result};

use super::{efg_component_index, DEFAULT_ETA_EV};

/// Single-particle electronic structure feeding the sum-over-states
/// estimators.
///
/// Energies in eV, position matrix elements `[r_p]_mn` in Å, EFG-operator
/// matrix elements `[V_ij]_mn` in V/Å².
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronicLevelModel {
    energies: Vec<f64>,
    occupations: Vec<f64>,
    dipole: [CMatrix; 3],
    efg: [CMatrix; 6],
    eta: f64,
}

fn check_hermitian(m: &CMatrix, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(OnqError::invalid(format!("{what} must be {n}×{n}")));
    }
    let scale = m.camax().max(1.0);
    if (m - m.adjoint()).camax() > 1e-10 * scale {
        return Err(OnqError::invalid(format!("{what} is not Hermitian")));
    }
    Ok(())
}

impl ElectronicLevelModel {
    /// `efg` is ordered xx, yy, zz, xy, xz, yz.
    ///
    /// η must be non-negative; η = 0 is accepted for ideal off-resonant
    /// models, in which case an exactly resonant denominator is an error.
    pub fn new(
        energies: Vec<f64>,
        occupations: Vec<f64>,
        dipole: [CMatrix; 3],
        efg: [CMatrix; 6],
        eta: f64,
    ) -> Result<Self> {
        let n = energies.len();
        if n == 0 {
            return Err(OnqError::invalid("level model has no levels"));
        }
        if occupations.len() != n {
            return Err(OnqError::invalid("occupations length differs from energies"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(OnqError::invalid("non-finite level energy"));
        }
        if occupations.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(OnqError::invalid("occupations must lie in [0, 1]"));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(OnqError::invalid("linewidth η must be finite and non-negative"));
        }
        for (p, m) in dipole.iter().enumerate() {
            check_hermitian(m, n, &format!("dipole[{p}]"))?;
        }
        for (k, m) in efg.iter().enumerate() {
            check_hermitian(m, n, &format!("efg[{k}]"))?;
        }
        Ok(Self { energies, occupations, dipole, efg, eta })
    }

    /// Model with all matrix elements zero and the default η.
    pub fn empty(energies: Vec<f64>, occupations: Vec<f64>) -> Result<Self> {
        let n = energies.len();
        let z = || CMatrix::zeros(n, n);
        Self::new(
            energies,
            occupations,
            [z(), z(), z()],
            [z(), z(), z(), z(), z(), z()],
            DEFAULT_ETA_EV,
        )
    }

    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn dipole(&self, p: usize) -> &CMatrix {
        &self.dipole[p]
    }

    pub fn efg(&self, i: usize, j: usize) -> &CMatrix {
        &self.efg[efg_component_index(i, j)]
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(OnqError::invalid("linewidth η must be finite and non-negative"));
        }
        self.eta = eta;
        Ok(self)
    }

    /// Sets `[r_p]_mn` and its Hermitian partner.
    pub fn set_dipole(&mut self, p: usize, m: usize, n: usize, v: crate::Complex64) {
        self.dipole[p][(m, n)] = v;
        self.dipole[p][(n, m)] = v.conj();
    }

    /// Sets `[V_ij]_mn` and its Hermitian partner.
    pub fn set_efg(&mut self, i: usize, j: usize, m: usize, n: usize, v: crate::Complex64) {
        let k = efg_component_index(i, j);
        self.efg[k][(m, n)] = v;
        self.efg[k][(n, m)] = v.conj();
    }

    /// Multiplies every position matrix element by `s`.
    pub fn scale_dipoles(&mut self, s: f64) {
        for m in &mut self.dipole {
            *m *= crate::Complex64::new(s, 0.0);
        }
    }
}
