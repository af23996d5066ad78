//! CODATA-2018 physical constants (SI).

use std::f64::consts::PI;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability, N/A².
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Electron rest mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// 1 eV expressed as an ordinary frequency, Hz (e/h).
pub const EV_IN_HZ: f64 = ELEMENTARY_CHARGE / PLANCK;
/// Electron spin degeneracy used by the closed-form tensor estimates.
pub const SPIN_DEGENERACY: f64 = 2.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_to_hz_matches_tabulated_value() {
        assert!((EV_IN_HZ / 2.417_989e14 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn vacuum_constants_are_consistent() {
        let c = 1.0 / (EPSILON_0 * MU_0).sqrt();
        assert!((c / SPEED_OF_LIGHT - 1.0).abs() < 1e-9);
    }
}
