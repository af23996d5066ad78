//! Unit conversions between user-facing units and the internal convention
//! (SI lengths and fields, angular frequencies in rad/s, ħ = 1).

use std::f64::consts::PI;

use crate::constants::{ELEMENTARY_CHARGE, HBAR};

/// 2π·MHz in rad/s.
pub const MHZ_2PI: f64 = 2.0 * PI * 1e6;
/// 2π·kHz in rad/s.
pub const KHZ_2PI: f64 = 2.0 * PI * 1e3;
/// 2π·GHz in rad/s.
pub const GHZ_2PI: f64 = 2.0 * PI * 1e9;
/// 1 V/Å in V/m.
pub const V_PER_ANGSTROM: f64 = 1e10;
/// 1 V/Å² in V/m².
pub const V_PER_ANGSTROM2: f64 = 1e20;
/// 1 MV/cm in V/m.
pub const MV_PER_CM: f64 = 1e8;
/// 1 Å in m.
pub const ANGSTROM: f64 = 1e-10;
/// 1 barn in m².
pub const BARN: f64 = 1e-28;
/// 1 eV in J.
pub const EV: f64 = ELEMENTARY_CHARGE;

/// Photon energy in eV → angular frequency in rad/s.
pub fn ev_to_angular(ev: f64) -> f64 {
    ev * EV / HBAR
}

/// Angular frequency in rad/s → energy in eV.
pub fn angular_to_ev(omega: f64) -> f64 {
    omega * HBAR / EV
}

/// Angular frequency → ordinary frequency.
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Ordinary frequency → angular frequency.
pub fn hz_to_angular(f: f64) -> f64 {
    f * 2.0 * PI
}

/// MV/cm → V/Å.
pub fn mv_per_cm_to_v_per_angstrom(e: f64) -> f64 {
    e * MV_PER_CM / V_PER_ANGSTROM
}
