use std::f64::consts::FRAC_PI_2;

use crate::{OnqError, Result};

use super::integrate::{EvolveOptions, Recorder, SimResult};
use super::system::{build_transduction_system, CouplingGates, DensityMatrix, TransductionParams};

/// One constant-coupling interval of a protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolStage {
    /// s
    pub duration: f64,
    pub optical_on: bool,
    pub mw_on: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSchedule {
    stages: Vec<ProtocolStage>,
}

impl ProtocolSchedule {
    pub fn new(stages: Vec<ProtocolStage>) -> Result<Self> {
        if stages.iter().any(|s| !(s.duration > 0.0 && s.duration.is_finite())) {
            return Err(OnqError::invalid("stage durations must be positive"));
        }
        Ok(Self { stages })
    }

    /// Optical swap for π/(2G_o), then microwave swap for π/(2G_m).
    pub fn sequential_swap(g_optical: f64, g_mw: f64) -> Result<Self> {
        if g_optical == 0.0 || g_mw == 0.0 {
            return Err(OnqError::invalid("swap stages need non-zero couplings"));
        }
        Self::new(vec![
            ProtocolStage { duration: FRAC_PI_2 / g_optical.abs(), optical_on: true, mw_on: false },
            ProtocolStage { duration: FRAC_PI_2 / g_mw.abs(), optical_on: false, mw_on: true },
        ])
    }

    pub fn stages(&self) -> &[ProtocolStage] {
        &self.stages
    }

    pub fn total_duration(&self) -> f64 {
        self.stages.iter().map(|s| s.duration).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapProtocolParams {
    pub system: TransductionParams,
    /// `None` selects [`ProtocolSchedule::sequential_swap`].
    pub schedule: Option<ProtocolSchedule>,
    pub options: EvolveOptions,
}

impl SwapProtocolParams {
    pub fn new(system: TransductionParams) -> Self {
        Self { system, schedule: None, options: EvolveOptions::default() }
    }

    pub fn resolved_schedule(&self) -> Result<ProtocolSchedule> {
        match &self.schedule {
            Some(s) => Ok(s.clone()),
            None => ProtocolSchedule::sequential_swap(self.system.g_optical, self.system.g_mw),
        }
    }
}

/// Optical → microwave transfer of one photon by sequential swaps.
///
/// Starts in |1, g, 0⟩ and runs each stage with δ = 0 and only the gated
/// couplings. The fidelity is the terminal single-photon population of the
/// microwave mode.
pub fn run_swap_protocol(params: &SwapProtocolParams) -> Result<SimResult> {
    let mut sys_params = params.system;
    if sys_params.delta != 0.0 {
        log::warn!("swap protocol runs on resonance; δ = {} rad/s ignored", sys_params.delta);
        sys_params.delta = 0.0;
    }
    let schedule = params.resolved_schedule()?;
    let idle = build_transduction_system(&sys_params, CouplingGates::NONE)?;
    let rho0 = DensityMatrix::basis_state(&idle, 1, 0, 0)?;
    let mut rec = Recorder::new(&idle, params.options.stride, params.options.diagnostics)?;
    rec.record_initial(&rho0);
    if schedule.stages().is_empty() {
        log::warn!("protocol has no stages; nothing is transferred");
    }

    let mut rho = rho0;
    for (k, stage) in schedule.stages().iter().enumerate() {
        if (stage.optical_on && sys_params.g_optical == 0.0) || (stage.mw_on && sys_params.g_mw == 0.0) {
            return Err(OnqError::invalid(format!("stage {k} activates a coupling that is zero")));
        }
        let gates = CouplingGates { optical: stage.optical_on, mw: stage.mw_on };
        let sys = build_transduction_system(&sys_params, gates)?;
        rho = rec.stage(&sys, &rho, stage.duration, params.options.dt)?;
    }
    Ok(rec.finish(rho))
}

/// |F(2·truncation) − F(truncation)| for the same protocol.
pub fn truncation_sensitivity(params: &SwapProtocolParams) -> Result<f64> {
    let base = run_swap_protocol(params)?;
    let mut doubled = params.clone();
    doubled.system.optical_dim *= 2;
    doubled.system.mw_dim *= 2;
    doubled.options.diagnostics = false;
    let wide = run_swap_protocol(&doubled)?;
    Ok((wide.fidelity - base.fidelity).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ev_to_angular, GHZ_2PI, KHZ_2PI, MHZ_2PI};

    fn fig3a() -> TransductionParams {
        TransductionParams {
            g_optical: 0.24 * MHZ_2PI,
            g_mw: 0.3 * MHZ_2PI,
            delta: 0.0,
            kappa_optical: ev_to_angular(1.0) / 1e10,
            kappa_mw: GHZ_2PI / 1e5,
            gamma_n: KHZ_2PI,
            optical_dim: 3,
            mw_dim: 3,
        }
    }

    #[test]
    fn lossless_swap_is_perfect() {
        let mut p = fig3a();
        p.kappa_optical = 0.0;
        p.kappa_mw = 0.0;
        p.gamma_n = 0.0;
        let r = run_swap_protocol(&SwapProtocolParams::new(p)).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-6);
        assert!((r.overlap_fidelity - 1.0).abs() < 1e-6);
        assert_eq!(r.stage_durations.len(), 2);
    }

    #[test]
    fn reference_swap_fidelity() {
        let r = run_swap_protocol(&SwapProtocolParams::new(fig3a())).unwrap();
        assert!((0.85..=0.95).contains(&r.fidelity), "{}", r.fidelity);
        assert!(r.max_trace_deviation <= 1e-6);
        assert!(r.min_eigenvalue >= -1e-6);
    }

    #[test]
    fn empty_schedule_transfers_nothing() {
        let mut params = SwapProtocolParams::new(fig3a());
        params.schedule = Some(ProtocolSchedule::new(vec![]).unwrap());
        let r = run_swap_protocol(&params).unwrap();
        assert_eq!(r.fidelity, 0.0);
        assert_eq!(r.times, vec![0.0]);
    }

    #[test]
    fn zero_coupling_in_active_stage_is_rejected() {
        let mut p = fig3a();
        p.g_mw = 0.0;
        let mut params = SwapProtocolParams::new(p);
        assert!(run_swap_protocol(&params).is_err());
        params.schedule = Some(
            ProtocolSchedule::new(vec![ProtocolStage { duration: 1e-6, optical_on: false, mw_on: true }]).unwrap(),
        );
        assert!(matches!(run_swap_protocol(&params), Err(OnqError::InvalidArgument(_))));
        assert!(ProtocolSchedule::new(vec![ProtocolStage { duration: 0.0, optical_on: true, mw_on: false }]).is_err());
    }
}
