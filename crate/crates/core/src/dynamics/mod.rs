//! Optical cavity ⊗ collective nuclear spin ⊗ microwave cavity dynamics.
//!
//! The collective spin ensemble is a single two-level mode (|G⟩, |E⟩) with
//! √N-enhanced couplings. The composite basis is ordered
//! `optical ⊗ spin ⊗ microwave`, spin index 0 = ground.

mod fields;
mod integrate;
mod protocol;
mod system;

pub use fields::{
    adiabatic_beam_splitter_coupling, cavity_suppression_factor, collective_mw_coupling,
    collective_optical_coupling, ensemble_emission_rate, zero_point_electric_field,
    zero_point_magnetic_field, BosonicMode, CollectiveSpinMode,
};
pub use integrate::{evolve, propagate, required_time_step, EvolveOptions, SimResult};
pub use protocol::{run_swap_protocol, truncation_sensitivity, ProtocolSchedule, ProtocolStage, SwapProtocolParams};
pub use system::{
    build_transduction_system, lindblad_rhs, CompositeQuantumSystem, CouplingGates, DensityMatrix,
    TransductionParams,
};

/// Default Fock truncation per bosonic mode (photon numbers 0–2).
pub const DEFAULT_FOCK_DIM: usize = 3;
