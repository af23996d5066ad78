//! Opto-nuclear quadrupolar (ONQ) coupling toolkit.
//!
//! The crate is split along the physics:
//!
//! * [`spin`]: nuclear spin operators, Zeeman + quadrupole Hamiltonians and
//!   the two-photon matrix element `g_o`.
//! * [`tensors`]: first-order (`C`) and second-order (`D`) response of the
//!   quadrupole tensor to electric fields, from sum-over-states perturbation
//!   theory, closed-form estimates, or polynomial fits to EFG-vs-field data.
//! * [`dynamics`]: optical cavity ⊗ collective spin ⊗ microwave cavity
//!   Lindblad engine and the sequential-swap transduction protocol.
//! * [`feasibility`]: heating, ionization, readout and linewidth budgets.
//!
//! Internally ħ = 1 and every Hamiltonian entry is an angular frequency in
//! rad/s. Conversions to and from the user-facing units live in [`units`].

pub mod constants;
pub mod dynamics;
mod error;
pub mod feasibility;
pub mod spin;
pub mod tensors;
pub mod units;

pub use error::{OnqError, Result};

/// Dense complex matrix used for every operator on a Hilbert space.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense complex column vector (state vectors).
pub type CVector = nalgebra::DVector<num_complex::Complex64>;
pub use num_complex::Complex64;
