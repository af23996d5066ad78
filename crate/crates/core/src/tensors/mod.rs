//! Field-response tensors of the quadrupole interaction.
//!
//! `C_ij^p = ∂Q_ij/∂ℰ_p` (nuclear electric resonance) and
//! `D_ij^pq = ∂²Q_ij/∂ℰ_p∂ℰ_q` (the ONQ tensor), both reported in
//! 2π·MHz per (V/Å)ⁿ.

mod closed_form;
mod fit;
mod io;
mod model;
mod perturbation;

use nalgebra::{Matrix3, Vector3};

pub use closed_form::{c_closed_form, d_closed_form};
pub use fit::{fit_response_tensors, mirror_symmetry_report, Axis, ComponentFit, CrossFit, FitReport, MirrorComponent, MirrorReport};
pub use io::{read_efg_series, read_level_model, write_efg_series, write_level_model, EfgFieldSeries, EfgSample};
pub use model::ElectronicLevelModel;
pub use perturbation::{c_tensor_perturbation, d_tensor_perturbation, PerturbationDiagnostics};

/// Default electronic linewidth η, eV.
pub const DEFAULT_ETA_EV: f64 = 1e-3;

/// Independent EFG components in storage order.
pub const EFG_COMPONENTS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
pub const EFG_COMPONENT_NAMES: [&str; 6] = ["xx", "yy", "zz", "xy", "xz", "yz"];

/// Index of (i, j) in [`EFG_COMPONENTS`].
pub fn efg_component_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    EFG_COMPONENTS.iter().position(|&c| c == (a, b)).unwrap()
}

/// First-order response, indexed (i, j, p). Units 2π·MHz/(V/Å).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NerTensorC {
    c: [[[f64; 3]; 3]; 3],
}

impl NerTensorC {
    pub fn zero() -> Self {
        Self { c: [[[0.0; 3]; 3]; 3] }
    }

    pub fn get(&self, i: usize, j: usize, p: usize) -> f64 {
        self.c[i][j][p]
    }

    /// Sets C_ij^p and C_ji^p together.
    pub fn set(&mut self, i: usize, j: usize, p: usize, v: f64) {
        self.c[i][j][p] = v;
        self.c[j][i][p] = v;
    }

    /// Contracts with a field vector: Σ_p C_ij^p ℰ_p, in 2π·MHz.
    pub fn contract(&self, field: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| (0..3).map(|p| self.c[i][j][p] * field[p]).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = *self;
        out.c.iter_mut().flatten().flatten().for_each(|x| *x *= s);
        out
    }
}

/// Second-order ONQ response, indexed (i, j, p, q). Units 2π·MHz/(V/Å)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnqTensorD {
    d: [[[[f64; 3]; 3]; 3]; 3],
}

impl OnqTensorD {
    pub fn zero() -> Self {
        Self { d: [[[[0.0; 3]; 3]; 3]; 3] }
    }

    pub fn get(&self, i: usize, j: usize, p: usize, q: usize) -> f64 {
        self.d[i][j][p][q]
    }

    /// Sets the entry and its (i↔j), (p↔q) images.
    pub fn set(&mut self, i: usize, j: usize, p: usize, q: usize, v: f64) {
        for (a, b) in [(i, j), (j, i)] {
            self.d[a][b][p][q] = v;
            self.d[a][b][q][p] = v;
        }
    }

    /// Effective 3×3 coupling Σ_pq D_ij^pq ê₁_p ê₂_q for two polarisations.
    pub fn contract(&self, pol1: &Vector3<f64>, pol2: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| {
            let mut s = 0.0;
            for p in 0..3 {
                for q in 0..3 {
                    s += self.d[i][j][p][q] * pol1[p] * pol2[q];
                }
            }
            s
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.d.iter().flatten().flatten().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = *self;
        out.d.iter_mut().flatten().flatten().flatten().for_each(|x| *x *= s);
        out
    }
}
