use nalgebra::{Matrix3, Vector3};

use crate::{CMatrix, CVector, Complex64, OnqError, Result};

use super::{NuclearSpecies, QuadrupoleTensor, SpinOperators};

/// `H = g_m Σ B_i I_i + Σ Q_ij (I_i I_j + I_j I_i)/2` in rad/s.
///
/// `b_field` is in tesla. Use [`QuadrupoleTensor::zero`] for I = 1/2.
pub fn static_hamiltonian(
    species: &NuclearSpecies,
    b_field: &Vector3<f64>,
    quad: &QuadrupoleTensor,
    ops: &SpinOperators,
) -> Result<CMatrix> {
    if ops.dim() != species.dim() {
        return Err(OnqError::invalid(format!(
            "operators have dimension {} but {} needs {}",
            ops.dim(),
            species.label,
            species.dim()
        )));
    }
    let n = ops.dim();
    let gm = species.gyromagnetic_rad_per_s_t();
    let mut h = CMatrix::zeros(n, n);
    for i in 0..3 {
        if b_field[i] != 0.0 {
            h += ops.component(i).scale(gm * b_field[i]);
        }
    }
    let q = quad.matrix();
    for i in 0..3 {
        for j in 0..3 {
            if q[(i, j)] != 0.0 {
                h += ops.symmetric_product(i, j).scale(q[(i, j)]);
            }
        }
    }
    Ok(h)
}

fn check_normalized(v: &CVector, name: &str) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(OnqError::invalid(format!("state {name} has norm {norm}, expected 1")));
    }
    Ok(())
}

/// `g_o = Σ_ij D_ij ⟨g| (I_i I_j + I_j I_i)/2 |e⟩`.
///
/// `d_eff` is the ONQ tensor already contracted with both field polarisations
/// (see [`crate::tensors::OnqTensorD::contract`]); its unit carries through,
/// normally 2π·MHz/(V/Å)².
pub fn onq_coupling_strength(
    d_eff: &Matrix3<f64>,
    g_state: &CVector,
    e_state: &CVector,
    ops: &SpinOperators,
) -> Result<Complex64> {
    if g_state.len() != ops.dim() || e_state.len() != ops.dim() {
        return Err(OnqError::invalid("state dimension does not match spin operators"));
    }
    check_normalized(g_state, "|g>")?;
    check_normalized(e_state, "|e>")?;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            let d = d_eff[(i, j)];
            if d == 0.0 {
                continue;
            }
            let me = g_state.dotc(&(ops.symmetric_product(i, j) * e_state));
            total += me * d;
        }
    }
    Ok(total)
}

/// Single-spin Rabi frequency `|g_o|·ℰ₁·ℰ₂` reported as an ordinary
/// frequency in Hz. `g_o` in 2π·MHz/(V/Å)², fields in V/Å.
pub fn single_spin_rabi_frequency(g_o: Complex64, e1: f64, e2: f64) -> Result<f64> {
    if e1 < 0.0 || e2 < 0.0 || !e1.is_finite() || !e2.is_finite() {
        return Err(OnqError::invalid("field amplitudes must be finite and non-negative"));
    }
    // (2π·MHz)/2π = 1e6 Hz
    Ok(g_o.norm() * e1 * e2 * 1e6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{quadrupole_coupling_constant, quadrupole_tensor, spin_levels, spin_operators, EfgTensor};

    fn ga69() -> NuclearSpecies {
        NuclearSpecies::new("69Ga", 1.5, 0.171, 10.22).unwrap()
    }

    #[test]
    fn pure_zeeman_splitting() {
        let sp = NuclearSpecies::new("13C", 0.5, 0.0, 10.7084).unwrap();
        let ops = spin_operators(0.5).unwrap();
        let b = 2.0;
        let h = static_hamiltonian(&sp, &Vector3::new(0.0, 0.0, b), &QuadrupoleTensor::zero(), &ops).unwrap();
        let lv = spin_levels(&h).unwrap();
        let split = lv.energies()[1] - lv.energies()[0];
        let expected = sp.gyromagnetic_rad_per_s_t() * b;
        assert!((split / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let ops = spin_operators(2.5).unwrap();
        let r = static_hamiltonian(&ga69(), &Vector3::zeros(), &QuadrupoleTensor::zero(), &ops);
        assert!(r.is_err());
    }

    #[test]
    fn axial_three_halves_doublets() {
        let sp = ga69();
        let efg = EfgTensor::axial(3.34);
        let ops = spin_operators(1.5).unwrap();
        let q = quadrupole_tensor(&sp, &efg).unwrap();
        let h = static_hamiltonian(&sp, &Vector3::zeros(), &q, &ops).unwrap();
        assert!((&h - h.adjoint()).camax() <= 1e-12 * h.camax());
        let tr = h.trace();
        assert!(tr.norm() <= 1e-10 * h.camax());
        let lv = spin_levels(&h).unwrap();
        let e = lv.energies();
        // exact 4×4 oracle: m = ±3/2 at +3Q_zz/2, m = ±1/2 at −3Q_zz/2
        let qzz = q.matrix()[(2, 2)];
        let oracle = [-1.5 * qzz, -1.5 * qzz, 1.5 * qzz, 1.5 * qzz];
        let mut sorted = oracle;
        sorted.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(sorted.iter()) {
            assert!((a - b).abs() <= 1e-9 * qzz.abs());
        }
        let gap_hz = (e[2] - e[1]) / (2.0 * std::f64::consts::PI);
        let cq = quadrupole_coupling_constant(&sp, &efg);
        assert!((gap_hz / (cq / 2.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn small_field_lifts_degeneracy_linearly() {
        let sp = ga69();
        let ops = spin_operators(1.5).unwrap();
        let q = quadrupole_tensor(&sp, &EfgTensor::axial(3.34)).unwrap();
        let gm = sp.gyromagnetic_rad_per_s_t();
        for b in [1e-4, 2e-4, 4e-4] {
            let h = static_hamiltonian(&sp, &Vector3::new(0.0, 0.0, b), &q, &ops).unwrap();
            let e = spin_levels(&h).unwrap().energies().to_vec();
            // first-order: ±1/2 doublet splits by g_m·B, ±3/2 by 3·g_m·B
            let low = e[1] - e[0];
            let high = e[3] - e[2];
            let (small, large) = if q.matrix()[(2, 2)] > 0.0 { (low, high) } else { (high, low) };
            assert!((small / (gm * b) - 1.0).abs() < 1e-8);
            assert!((large / (3.0 * gm * b) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn coupling_zero_for_zero_tensor() {
        let ops = spin_operators(1.5).unwrap();
        let g = CVector::from_fn(4, |i, _| if i == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
        let e = CVector::from_fn(4, |i, _| if i == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
        let go = onq_coupling_strength(&Matrix3::zeros(), &g, &e, &ops).unwrap();
        assert_eq!(go, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn coupling_xz_matrix_element() {
        let ops = spin_operators(1.5).unwrap();
        let basis = |k: usize| CVector::from_fn(4, |i, _| if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
        // |g> = |m=1/2>, |e> = |m=3/2>
        let (g, e) = (basis(1), basis(0));
        let mut d = Matrix3::zeros();
        d[(0, 2)] = 7.0;
        d[(2, 0)] = 7.0;
        let go = onq_coupling_strength(&d, &g, &e, &ops).unwrap();
        // oracle: <1/2|I_x I_z + I_z I_x|3/2> = (3/2 + 1/2)·<1/2|I_x|3/2> = 2·√3/2
        let oracle = 7.0 * 2.0 * (3f64.sqrt() / 2.0);
        assert!((go - Complex64::new(oracle, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn coupling_rejects_unnormalized() {
        let ops = spin_operators(1.5).unwrap();
        let v = CVector::from_element(4, Complex64::new(1.0, 0.0));
        assert!(onq_coupling_strength(&Matrix3::identity(), &v, &v, &ops).is_err());
    }

    #[test]
    fn rabi_frequency_properties() {
        let g = Complex64::new(0.0, 20.0);
        assert_eq!(single_spin_rabi_frequency(g, 0.0, 0.3).unwrap(), 0.0);
        assert!(single_spin_rabi_frequency(g, -1.0, 0.3).is_err());
        let f = single_spin_rabi_frequency(g, 0.005, 0.005).unwrap();
        let f2 = single_spin_rabi_frequency(g, 0.01, 0.01).unwrap();
        assert!((f2 / f - 4.0).abs() < 1e-12);
        // 0.5 MV/cm, D = 20 → order 100 Hz
        assert!(f > 10.0 && f < 1000.0, "f = {f}");
    }
}
