use crate::{CMatrix, Complex64, Result};

use super::twice_spin;

/// Largest supported 2I (I = 9/2).
pub const MAX_TWICE_SPIN: usize = 9;

/// Angular-momentum matrices I_x, I_y, I_z in the I_z basis ordered
/// m = I, I−1, …, −I (ħ = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    spin_i: f64,
    components: [CMatrix; 3],
}

/// Builds the (2I+1)-dimensional representation from ladder coefficients.
pub fn spin_operators(spin_i: f64) -> Result<SpinOperators> {
    let twice = twice_spin(spin_i)?;
    let dim = twice + 1;
    let j = twice as f64 / 2.0;
    let m = |k: usize| j - k as f64;

    // ⟨m+1|I₊|m⟩ sits at (k−1, k) since index k holds m = I − k.
    let mut raise = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        let mk = m(k);
        raise[(k - 1, k)] = Complex64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let ix = (&raise + &lower).scale(0.5);
    let iy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let iz = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(m(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    Ok(SpinOperators {
        spin_i: j,
        components: [ix, iy, iz],
    })
}

impl SpinOperators {
    pub fn spin_i(&self) -> f64 {
        self.spin_i
    }

    pub fn dim(&self) -> usize {
        self.components[2].nrows()
    }

    pub fn ix(&self) -> &CMatrix {
        &self.components[0]
    }

    pub fn iy(&self) -> &CMatrix {
        &self.components[1]
    }

    pub fn iz(&self) -> &CMatrix {
        &self.components[2]
    }

    /// Cartesian component by index (0 = x, 1 = y, 2 = z).
    pub fn component(&self, i: usize) -> &CMatrix {
        &self.components[i]
    }

    /// Raising operator I₊ = I_x + i·I_y.
    pub fn raising(&self) -> CMatrix {
        self.ix() + self.iy() * Complex64::i()
    }

    /// Symmetrized product (I_i I_j + I_j I_i)/2.
    pub fn symmetric_product(&self, i: usize, j: usize) -> CMatrix {
        let a = self.component(i);
        let b = self.component(j);
        (a * b + b * a).scale(0.5)
    }

    /// I_x² + I_y² + I_z².
    pub fn casimir(&self) -> CMatrix {
        self.components.iter().map(|c| c * c).fold(
            CMatrix::zeros(self.dim(), self.dim()),
            |acc, x| acc + x,
        )
    }
}
