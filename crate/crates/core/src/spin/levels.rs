use nalgebra::SymmetricEigen;

use crate::{CMatrix, CVector, Complex64, OnqError, Result};

/// Eigen-decomposition of a spin Hamiltonian.
///
/// Energies are ascending (rad/s). Eigenvectors are the columns of
/// `eigenstates`, expressed in the I_z basis (m = I … −I).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinLevelStructure {
    energies: Vec<f64>,
    eigenstates: CMatrix,
    degeneracy_tol: f64,
}

impl SpinLevelStructure {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn eigenstates(&self) -> &CMatrix {
        &self.eigenstates
    }

    pub fn state(&self, k: usize) -> CVector {
        self.eigenstates.column(k).into_owned()
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Distinct levels with their multiplicities.
    pub fn distinct_levels(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &e in &self.energies {
            match out.last_mut() {
                Some((e0, n)) if (e - *e0).abs() <= self.degeneracy_tol => *n += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    /// Index of the lowest eigenstate lying strictly above the ground level.
    pub fn first_excited_index(&self) -> Option<usize> {
        let e0 = self.energies[0];
        self.energies
            .iter()
            .position(|&e| e - e0 > self.degeneracy_tol)
    }

    /// ε_e − ε_g in rad/s.
    pub fn splitting(&self, g: usize, e: usize) -> f64 {
        self.energies[e] - self.energies[g]
    }
}

/// Diagonalises a Hermitian spin Hamiltonian.
///
/// Degenerate subspaces are resolved deterministically: the basis maximising
/// overlap with I_z eigenstates is chosen, then each vector's global phase is
/// fixed so its largest-magnitude component is real and positive.
pub fn spin_levels(h: &CMatrix) -> Result<SpinLevelStructure> {
    let n = h.nrows();
    if n == 0 || h.ncols() != n {
        return Err(OnqError::invalid("Hamiltonian must be a non-empty square matrix"));
    }
    let scale = h.camax().max(f64::MIN_POSITIVE);
    if (h - h.adjoint()).camax() > 1e-10 * scale {
        return Err(OnqError::invalid("Hamiltonian is not Hermitian"));
    }

    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let spread = energies.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let tol = 1e-9 * spread.max(h.camax()).max(f64::MIN_POSITIVE);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && energies[end] - energies[start] <= tol {
            end += 1;
        }
        if end - start > 1 {
            let block = resolve_degenerate(&vecs.columns(start, end - start).into_owned());
            vecs.columns_mut(start, end - start).copy_from(&block);
        }
        start = end;
    }
    for mut col in vecs.column_iter_mut() {
        let mut best = 0;
        for k in 1..n {
            if col[k].norm() > col[best].norm() + 1e-12 {
                best = k;
            }
        }
        let phase = col[best] / col[best].norm();
        col.iter_mut().for_each(|x| *x /= phase);
    }

    Ok(SpinLevelStructure {
        energies,
        eigenstates: vecs,
        degeneracy_tol: tol,
    })
}

/// Re-bases a degenerate subspace onto its projections of I_z basis states.
fn resolve_degenerate(sub: &CMatrix) -> CMatrix {
    let (n, k) = (sub.nrows(), sub.ncols());
    let projector = sub * sub.adjoint();

    // Rank basis states by projected weight; round so platform noise cannot
    // reorder near-ties.
    let mut cand: Vec<(usize, f64)> = (0..n)
        .map(|b| {
            let w = projector[(b, b)].re;
            (b, (w * 1e10).round() / 1e10)
        })
        .collect();
    cand.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut chosen: Vec<(usize, CVector)> = Vec::with_capacity(k);
    for (b, _) in cand {
        if chosen.len() == k {
            break;
        }
        let mut v: CVector = projector.column(b).into_owned();
        for (_, u) in &chosen {
            let c = u.dotc(&v);
            v -= u * c;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            chosen.push((b, v / Complex64::new(norm, 0.0)));
        }
    }
    chosen.sort_by_key(|(b, _)| *b);
    let mut out = CMatrix::zeros(n, k);
    for (c, (_, v)) in chosen.iter().enumerate() {
        out.set_column(c, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_diag(d: &[f64]) -> CMatrix {
        CMatrix::from_fn(d.len(), d.len(), |r, c| {
            if r == c { Complex64::new(d[r], 0.0) } else { Complex64::new(0.0, 0.0) }
        })
    }

    #[test]
    fn diagonal_input_sorts() {
        let lv = spin_levels(&real_diag(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(lv.energies(), &[-1.0, 2.0, 3.0]);
        // eigenvector of -1 is basis state 1
        assert!((lv.state(0)[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_subspace_aligns_with_basis() {
        let lv = spin_levels(&real_diag(&[1.0, 1.0, 0.0, 1.0])).unwrap();
        assert_eq!(lv.distinct_levels(), vec![(0.0, 1), (1.0, 3)]);
        let v = lv.eigenstates();
        let expect_idx = [2, 0, 1, 3];
        for (c, &b) in expect_idx.iter().enumerate() {
            assert!((v[(b, c)] - Complex64::new(1.0, 0.0)).norm() < 1e-12, "col {c}");
        }
        assert_eq!(lv.first_excited_index(), Some(1));
    }

    #[test]
    fn gauge_shift_leaves_splittings() {
        let h = CMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.2),
            Complex64::new(0.3, -0.2), Complex64::new(-0.5, 0.0),
        ]);
        let shifted = &h + CMatrix::identity(2, 2) * Complex64::new(7.5, 0.0);
        let a = spin_levels(&h).unwrap();
        let b = spin_levels(&shifted).unwrap();
        assert!((a.splitting(0, 1) - b.splitting(0, 1)).abs() < 1e-12);
    }

    #[test]
    fn eigenstates_are_unitary_with_fixed_phase() {
        let h = CMatrix::from_row_slice(3, 3, &[
            Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.2), Complex64::new(0.0, 0.1),
            Complex64::new(0.3, -0.2), Complex64::new(-0.5, 0.0), Complex64::new(0.2, 0.0),
            Complex64::new(0.0, -0.1), Complex64::new(0.2, 0.0), Complex64::new(0.4, 0.0),
        ]);
        let lv = spin_levels(&h).unwrap();
        let u = lv.eigenstates();
        assert!((u.adjoint() * u - CMatrix::identity(3, 3)).camax() < 1e-10);
        for col in u.column_iter() {
            let big = col.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
            assert!(big.im.abs() < 1e-12 && big.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = CMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0),
        ]);
        assert!(spin_levels(&h).is_err());
    }
}
