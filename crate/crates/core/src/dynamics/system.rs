use nalgebra::SymmetricEigen;

use crate::{CMatrix, CVector, Complex64, OnqError, Result};

/// Couplings and rates of the transduction Hamiltonian, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransductionParams {
    /// Collective optical coupling G_o.
    pub g_optical: f64,
    /// Collective microwave coupling G_m.
    pub g_mw: f64,
    /// Spin–microwave detuning δ.
    pub delta: f64,
    pub kappa_optical: f64,
    pub kappa_mw: f64,
    /// Collective spin relaxation Γ_n.
    pub gamma_n: f64,
    pub optical_dim: usize,
    pub mw_dim: usize,
}

impl TransductionParams {
    pub fn validate(&self) -> Result<()> {
        for (x, name) in [(self.g_optical, "G_o"), (self.g_mw, "G_m"), (self.delta, "δ")] {
            if !x.is_finite() {
                return Err(OnqError::invalid(format!("{name} must be finite")));
            }
        }
        for (x, name) in [(self.kappa_optical, "κ_o"), (self.kappa_mw, "κ_m"), (self.gamma_n, "Γ_n")] {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(OnqError::invalid(format!("{name} must be non-negative")));
            }
        }
        if self.optical_dim < 2 || self.mw_dim < 2 {
            return Err(OnqError::invalid("Fock truncations must be at least 2"));
        }
        Ok(())
    }
}

/// Which exchange terms are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingGates {
    pub optical: bool,
    pub mw: bool,
}

impl CouplingGates {
    pub const BOTH: Self = Self { optical: true, mw: true };
    pub const NONE: Self = Self { optical: false, mw: false };
}

/// Hamiltonian and jump operators on optical ⊗ spin ⊗ microwave.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeQuantumSystem {
    dims: [usize; 3],
    hamiltonian: CMatrix,
    dissipators: Vec<(CMatrix, f64)>,
    /// Non-zero entries of H − (i/2) Σ γ L†L.
    h_eff: Vec<Entry>,
    /// Non-zero entries of each jump operator with a positive rate.
    jumps: Vec<(f64, Vec<Entry>)>,
}

type Entry = (usize, usize, Complex64);

fn entries(m: &CMatrix) -> Vec<Entry> {
    let mut out = Vec::new();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let v = m[(r, c)];
            if v != Complex64::new(0.0, 0.0) {
                out.push((r, c, v));
            }
        }
    }
    out
}

impl CompositeQuantumSystem {
    pub fn new(dims: [usize; 3], hamiltonian: CMatrix, dissipators: Vec<(CMatrix, f64)>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if dims.contains(&0) {
            return Err(OnqError::invalid("mode dimensions must be positive"));
        }
        if hamiltonian.nrows() != n || hamiltonian.ncols() != n {
            return Err(OnqError::invalid(format!("Hamiltonian must be {n}×{n}")));
        }
        let scale = hamiltonian.camax().max(1.0);
        if (&hamiltonian - hamiltonian.adjoint()).camax() > 1e-12 * scale {
            return Err(OnqError::invalid("Hamiltonian is not Hermitian"));
        }
        let mut h_eff = hamiltonian.clone();
        for (l, rate) in &dissipators {
            if l.nrows() != n || l.ncols() != n {
                return Err(OnqError::invalid(format!("jump operator must be {n}×{n}")));
            }
            if !(*rate >= 0.0 && rate.is_finite()) {
                return Err(OnqError::invalid("dissipator rates must be non-negative"));
            }
            h_eff -= (l.adjoint() * l) * Complex64::new(0.0, 0.5 * rate);
        }
        let jumps = dissipators.iter().filter(|(_, r)| *r > 0.0).map(|(l, r)| (*r, entries(l))).collect();
        let h_eff = entries(&h_eff);
        Ok(Self { dims, hamiltonian, dissipators, h_eff, jumps })
    }

    /// [optical, spin, microwave] dimensions.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn dissipators(&self) -> &[(CMatrix, f64)] {
        &self.dissipators
    }

    /// Index of |n_o, s, n_m⟩.
    pub fn basis_index(&self, n_o: usize, s: usize, n_m: usize) -> usize {
        (n_o * self.dims[1] + s) * self.dims[2] + n_m
    }

    /// a_o†a_o.
    pub fn number_optical(&self) -> CMatrix {
        self.diagonal(|o, _, _| o as f64)
    }

    /// σ⁺σ⁻ = |e⟩⟨e|.
    pub fn number_spin(&self) -> CMatrix {
        self.diagonal(|_, s, _| s as f64)
    }

    /// a_m†a_m.
    pub fn number_mw(&self) -> CMatrix {
        self.diagonal(|_, _, m| m as f64)
    }

    /// Projector onto exactly one microwave photon.
    pub fn mw_single_photon_projector(&self) -> CMatrix {
        self.diagonal(|_, _, m| if m == 1 { 1.0 } else { 0.0 })
    }

    fn diagonal(&self, f: impl Fn(usize, usize, usize) -> f64) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for o in 0..self.dims[0] {
            for s in 0..self.dims[1] {
                for m in 0..self.dims[2] {
                    let k = self.basis_index(o, s, m);
                    out[(k, k)] = Complex64::new(f(o, s, m), 0.0);
                }
            }
        }
        out
    }
}

fn annihilation(d: usize) -> CMatrix {
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn kron3(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    a.kronecker(b).kronecker(c)
}

/// `H = δ/2 σ_z + G_o(a_o†σ⁻ + h.c.)·[optical] + G_m(a_m†σ⁻ + h.c.)·[mw]` with
/// jump operators a_o (κ_o), a_m (κ_m) and σ⁻ (Γ_n).
pub fn build_transduction_system(params: &TransductionParams, gates: CouplingGates) -> Result<CompositeQuantumSystem> {
    params.validate()?;
    let (d_o, d_m) = (params.optical_dim, params.mw_dim);
    let id_o = CMatrix::identity(d_o, d_o);
    let id_s = CMatrix::identity(2, 2);
    let id_m = CMatrix::identity(d_m, d_m);

    let a_o = kron3(&annihilation(d_o), &id_s, &id_m);
    let a_m = kron3(&id_o, &id_s, &annihilation(d_m));
    let mut sm = CMatrix::zeros(2, 2);
    sm[(0, 1)] = Complex64::new(1.0, 0.0);
    let sigma_minus = kron3(&id_o, &sm, &id_m);
    let mut sz = CMatrix::zeros(2, 2);
    sz[(0, 0)] = Complex64::new(-1.0, 0.0);
    sz[(1, 1)] = Complex64::new(1.0, 0.0);
    let sigma_z = kron3(&id_o, &sz, &id_m);

    let c = |x: f64| Complex64::new(x, 0.0);
    let mut h = sigma_z * c(0.5 * params.delta);
    if gates.optical {
        let x = a_o.adjoint() * &sigma_minus;
        h += (&x + x.adjoint()) * c(params.g_optical);
    }
    if gates.mw {
        let x = a_m.adjoint() * &sigma_minus;
        h += (&x + x.adjoint()) * c(params.g_mw);
    }
    // exact Hermiticity
    let h = (&h + h.adjoint()) * c(0.5);
    let dissipators = vec![(a_o, params.kappa_optical), (a_m, params.kappa_mw), (sigma_minus, params.gamma_n)];
    CompositeQuantumSystem::new([d_o, 2, d_m], h, dissipators)
}

/// Density matrix on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-8) and positivity
    /// (eigenvalues ≥ −1e-8).
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
            return Err(OnqError::invalid("density matrix must be square"));
        }
        let dm = Self { rho };
        if dm.hermiticity_error() > 1e-10 {
            return Err(OnqError::invalid("density matrix is not Hermitian"));
        }
        if (dm.trace() - 1.0).abs() > 1e-8 {
            return Err(OnqError::invalid(format!("density matrix trace is {}", dm.trace())));
        }
        if dm.min_eigenvalue() < -1e-8 {
            return Err(OnqError::invalid("density matrix has negative eigenvalues"));
        }
        Ok(dm)
    }

    /// |ψ⟩⟨ψ| for a normalised ψ.
    pub fn pure(psi: &CVector) -> Result<Self> {
        if (psi.norm() - 1.0).abs() > 1e-10 {
            return Err(OnqError::invalid("state vector is not normalised"));
        }
        Ok(Self { rho: psi * psi.adjoint() })
    }

    /// |n_o, s, n_m⟩⟨n_o, s, n_m| on `system`'s space.
    pub fn basis_state(system: &CompositeQuantumSystem, n_o: usize, s: usize, n_m: usize) -> Result<Self> {
        let [d_o, d_s, d_m] = system.dims();
        if n_o >= d_o || s >= d_s || n_m >= d_m {
            return Err(OnqError::invalid("basis state outside the truncated space"));
        }
        let mut rho = CMatrix::zeros(system.dim(), system.dim());
        let k = system.basis_index(n_o, s, n_m);
        rho[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(Self { rho })
    }

    pub(crate) fn from_raw(rho: CMatrix) -> Self {
        Self { rho }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).camax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Re tr(O ρ).
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        (op * &self.rho).trace().re
    }

    /// ρ_kk for basis index k.
    pub fn population(&self, k: usize) -> f64 {
        self.rho[(k, k)].re
    }
}

pub(crate) fn rhs_raw(system: &CompositeQuantumSystem, rho: &CMatrix) -> CMatrix {
    let n = rho.nrows();
    let mut hr = CMatrix::zeros(n, n);
    for &(r, c, v) in &system.h_eff {
        for k in 0..n {
            hr[(r, k)] += v * rho[(c, k)];
        }
    }
    // −i(H_eff ρ − ρ H_eff†) with ρ H_eff† = (H_eff ρ)† for Hermitian ρ
    let mut out = CMatrix::from_fn(n, n, |r, c| {
        let d = hr[(r, c)] - hr[(c, r)].conj();
        Complex64::new(d.im, -d.re)
    });
    for (rate, l) in &system.jumps {
        for &(i, a, la) in l {
            let la = la * *rate;
            for &(j, b, lb) in l {
                out[(i, j)] += la * rho[(a, b)] * lb.conj();
            }
        }
    }
    out
}

/// `dρ/dt = −i[H, ρ] + Σ_k γ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})`.
pub fn lindblad_rhs(system: &CompositeQuantumSystem, rho: &DensityMatrix) -> Result<CMatrix> {
    if rho.dim() != system.dim() {
        return Err(OnqError::invalid(format!(
            "density matrix dimension {} differs from system dimension {}",
            rho.dim(),
            system.dim()
        )));
    }
    Ok(rhs_raw(system, rho.matrix()))
}
