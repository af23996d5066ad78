//! Order-of-magnitude closed forms for C and D from a single dominant
//! band pair with hydrogenic matrix elements.

use std::f64::consts::PI;

use crate::constants::{ELEMENTARY_CHARGE, EPSILON_0, HBAR, SPIN_DEGENERACY};
use crate::spin::NuclearSpecies;
use crate::units::{ANGSTROM, EV, MHZ_2PI, V_PER_ANGSTROM, V_PER_ANGSTROM2};
use crate::{OnqError, Result};

fn check_common(species: &NuclearSpecies, e_gap: f64, a0: f64) -> Result<f64> {
    if !(e_gap > 0.0 && e_gap.is_finite()) {
        return Err(OnqError::invalid("e_gap must be positive"));
    }
    if !(a0 > 0.0 && a0.is_finite()) {
        return Err(OnqError::invalid("a0 must be positive"));
    }
    species.quadrupole_normalization()
}

/// `C ≈ g_s e³q / (2I(2I−1)) · 1/(4πε₀a₀²) · 1/E_g`, in 2π·MHz/(V/Å).
///
/// `e_gap` in eV, `a0` in Å.
pub fn c_closed_form(species: &NuclearSpecies, e_gap: f64, a0: f64) -> Result<f64> {
    let norm = check_common(species, e_gap, a0)?;
    let e = ELEMENTARY_CHARGE;
    let a = a0 * ANGSTROM;
    let si = SPIN_DEGENERACY * e.powi(3) * species.quadrupole_moment_m2()
        / (norm * 4.0 * PI * EPSILON_0 * a * a * e_gap * EV);
    Ok(si / HBAR * V_PER_ANGSTROM / MHZ_2PI)
}

/// `D ∼ g_s e⁴q / (2I(2I−1)) · 1/(4πε₀a₀) · 1/(E_g(E_g − ω))`, in
/// 2π·MHz/(V/Å)².
///
/// `e_gap` and `omega_pump` in eV, `a0` in Å.
pub fn d_closed_form(species: &NuclearSpecies, e_gap: f64, omega_pump: f64, a0: f64) -> Result<f64> {
    let norm = check_common(species, e_gap, a0)?;
    if !(omega_pump >= 0.0) {
        return Err(OnqError::invalid("omega_pump must be non-negative"));
    }
    if omega_pump >= e_gap {
        return Err(OnqError::invalid(format!(
            "omega_pump {omega_pump} eV is not below the gap {e_gap} eV"
        )));
    }
    let e = ELEMENTARY_CHARGE;
    let a = a0 * ANGSTROM;
    let si = SPIN_DEGENERACY * e.powi(4) * species.quadrupole_moment_m2()
        / (norm * 4.0 * PI * EPSILON_0 * a * e_gap * EV * (e_gap - omega_pump) * EV);
    Ok(si / HBAR * V_PER_ANGSTROM2 / MHZ_2PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A0: f64 = 0.529_177_210_903;

    fn sp(i: f64, q: f64) -> NuclearSpecies {
        NuclearSpecies::new("x", i, q, 10.0).unwrap()
    }

    #[test]
    fn zero_moment_gives_zero() {
        assert_eq!(c_closed_form(&sp(1.5, 0.0), 1.0, A0).unwrap(), 0.0);
        assert_eq!(d_closed_form(&sp(1.5, 0.0), 1.0, 0.5, A0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(c_closed_form(&sp(1.5, 0.1), 0.0, A0).is_err());
        assert!(c_closed_form(&sp(1.5, 0.1), 1.0, -1.0).is_err());
        assert!(d_closed_form(&sp(1.5, 0.1), 1.0, 1.0, A0).is_err());
        assert!(matches!(c_closed_form(&sp(0.5, 0.0), 1.0, A0), Err(OnqError::SpinTooSmall { .. })));
    }

    #[test]
    fn hand_arithmetic_oracle() {
        // 75As, I = 3/2: 2 e³ q / (6 · 4πε₀ a₀² · E_g) with E_g = 1.42 eV
        let e = 1.602_176_634e-19_f64;
        let k = 8.987_551_792_3e9; // 1/(4πε₀)
        let a = 0.529_177_210_903e-10;
        let q = 0.314e-28;
        let hbar = 1.054_571_817e-34;
        let c = 2.0 * e.powi(3) * q * k / (6.0 * a * a * 1.42 * e) / hbar * 1e10 / (2.0 * PI * 1e6);
        let got = c_closed_form(&sp(1.5, 0.314), 1.42, A0).unwrap();
        assert!((got / c - 1.0).abs() < 1e-8, "{got} vs {c}");
        assert!((got - 9.17).abs() < 0.05);
    }

    #[test]
    fn monotone_in_gap_and_pump() {
        let s = sp(1.5, 0.171);
        let c1 = c_closed_form(&s, 1.0, A0).unwrap();
        let c2 = c_closed_form(&s, 2.0, A0).unwrap();
        assert!((c1 / c2 - 2.0).abs() < 1e-12);
        let mut last = 0.0;
        for w in [0.0, 1.0, 2.0, 3.0, 3.3, 3.39] {
            let d = d_closed_form(&s, 3.4, w, A0).unwrap();
            assert!(d > last);
            last = d;
        }
    }
}
