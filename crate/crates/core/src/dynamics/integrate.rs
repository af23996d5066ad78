use crate::{CMatrix, Complex64, OnqError, Result};

use super::system::{rhs_raw, CompositeQuantumSystem, DensityMatrix};

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Fixed step in s. `None` uses [`required_time_step`].
    pub dt: Option<f64>,
    /// Record every `stride`-th step (the last step is always recorded).
    pub stride: usize,
    /// Track the minimum eigenvalue of ρ at every record.
    pub diagnostics: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { dt: None, stride: 1, diagnostics: true }
    }
}

/// Time series and final state of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// s
    pub times: Vec<f64>,
    /// ⟨a_o†a_o⟩
    pub pop_optical: Vec<f64>,
    /// ⟨σ⁺σ⁻⟩
    pub pop_spin: Vec<f64>,
    /// ⟨a_m†a_m⟩
    pub pop_mw: Vec<f64>,
    pub trace_series: Vec<f64>,
    /// Probability of exactly one microwave photon.
    pub fidelity_running: Vec<f64>,
    /// Terminal value of `fidelity_running`, clamped to [0, 1].
    pub fidelity: f64,
    /// ⟨0, g, 1|ρ|0, g, 1⟩ at the end.
    pub overlap_fidelity: f64,
    pub stage_durations: Vec<f64>,
    pub steps: usize,
    pub max_trace_deviation: f64,
    pub max_hermiticity_error: f64,
    /// Smallest eigenvalue of ρ seen at any record (final state only when
    /// diagnostics are off).
    pub min_eigenvalue: f64,
    pub final_state: DensityMatrix,
}

/// `1/(50·max(max|H_ij|, max γ))`; infinite for a static, closed system.
pub fn required_time_step(system: &CompositeQuantumSystem) -> f64 {
    let h = system.hamiltonian().camax();
    let g = system.dissipators().iter().map(|(_, r)| *r).fold(0.0, f64::max);
    let rate = h.max(g);
    if rate > 0.0 {
        1.0 / (50.0 * rate)
    } else {
        f64::INFINITY
    }
}

fn step_count(system: &CompositeQuantumSystem, duration: f64, dt: Option<f64>) -> Result<usize> {
    let required = required_time_step(system);
    match dt {
        Some(dt) => {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(OnqError::invalid("dt must be positive"));
            }
            if dt > required * (1.0 + 1e-12) {
                return Err(OnqError::StepTooLarge { dt, required });
            }
            Ok(((duration / dt).ceil() as usize).max(1))
        }
        None if required.is_finite() => Ok(((duration / required).ceil() as usize).max(1)),
        None => Ok(1),
    }
}

fn axpy(rho: &CMatrix, k: &CMatrix, h: f64) -> CMatrix {
    rho + k * Complex64::new(h, 0.0)
}

/// Fixed-step RK4 from `rho0` over `duration`. `observer(t, ρ)` runs after
/// every step with t measured from the start of this call. Returns the
/// final state and the number of steps.
pub fn propagate<F: FnMut(f64, &CMatrix)>(
    system: &CompositeQuantumSystem,
    rho0: &DensityMatrix,
    duration: f64,
    dt: Option<f64>,
    mut observer: F,
) -> Result<(DensityMatrix, usize)> {
    if rho0.dim() != system.dim() {
        return Err(OnqError::invalid("initial state dimension differs from the system"));
    }
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(OnqError::invalid("duration must be non-negative"));
    }
    if duration == 0.0 {
        return Ok((rho0.clone(), 0));
    }
    let n = step_count(system, duration, dt)?;
    let h = duration / n as f64;
    let mut rho = rho0.matrix().clone();
    for k in 0..n {
        let k1 = rhs_raw(system, &rho);
        let k2 = rhs_raw(system, &axpy(&rho, &k1, 0.5 * h));
        let k3 = rhs_raw(system, &axpy(&rho, &k2, 0.5 * h));
        let k4 = rhs_raw(system, &axpy(&rho, &k3, h));
        let incr = k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4;
        rho += incr * Complex64::new(h / 6.0, 0.0);
        observer((k + 1) as f64 * h, &rho);
    }
    Ok((DensityMatrix::from_raw(rho), n))
}

/// Accumulates observables over one or more consecutive stages.
pub(crate) struct Recorder {
    n_o: Vec<f64>,
    n_s: Vec<f64>,
    n_m: Vec<f64>,
    one_mw: Vec<f64>,
    target: usize,
    stride: usize,
    diagnostics: bool,
    counter: usize,
    offset: f64,
    steps: usize,
    stages: Vec<f64>,
    out: Series,
}

#[derive(Default)]
struct Series {
    times: Vec<f64>,
    pop_optical: Vec<f64>,
    pop_spin: Vec<f64>,
    pop_mw: Vec<f64>,
    trace: Vec<f64>,
    fidelity: Vec<f64>,
    max_trace_dev: f64,
    max_herm: f64,
    min_eig: f64,
}

impl Recorder {
    pub(crate) fn new(system: &CompositeQuantumSystem, stride: usize, diagnostics: bool) -> Result<Self> {
        if stride == 0 {
            return Err(OnqError::invalid("stride must be at least 1"));
        }
        let diag = |m: CMatrix| m.diagonal().iter().map(|z| z.re).collect::<Vec<_>>();
        Ok(Self {
            n_o: diag(system.number_optical()),
            n_s: diag(system.number_spin()),
            n_m: diag(system.number_mw()),
            one_mw: diag(system.mw_single_photon_projector()),
            target: system.basis_index(0, 0, 1.min(system.dims()[2] - 1)),
            stride,
            diagnostics,
            counter: 0,
            offset: 0.0,
            steps: 0,
            stages: Vec::new(),
            out: Series { min_eig: f64::INFINITY, ..Default::default() },
        })
    }

    fn push(&mut self, t: f64, rho: &CMatrix) {
        let d: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
        let dot = |w: &[f64]| w.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
        let tr: f64 = d.iter().sum();
        self.out.times.push(t);
        self.out.pop_optical.push(dot(&self.n_o));
        self.out.pop_spin.push(dot(&self.n_s));
        self.out.pop_mw.push(dot(&self.n_m));
        self.out.trace.push(tr);
        self.out.fidelity.push(dot(&self.one_mw));
        self.out.max_trace_dev = self.out.max_trace_dev.max((tr - 1.0).abs());
        self.out.max_herm = self.out.max_herm.max((rho - rho.adjoint()).camax());
        if self.diagnostics {
            let m = DensityMatrix::from_raw(rho.clone()).min_eigenvalue();
            self.out.min_eig = self.out.min_eig.min(m);
        }
    }

    pub(crate) fn record_initial(&mut self, rho: &DensityMatrix) {
        self.push(0.0, rho.matrix());
    }

    /// Runs one stage, recording with the global stride.
    pub(crate) fn stage(
        &mut self,
        system: &CompositeQuantumSystem,
        rho: &DensityMatrix,
        duration: f64,
        dt: Option<f64>,
    ) -> Result<DensityMatrix> {
        let offset = self.offset;
        let total = step_count(system, duration.max(f64::MIN_POSITIVE), dt)?;
        let mut local = 0usize;
        let (state, n) = propagate(system, rho, duration, dt, |t, m| {
            local += 1;
            self.counter += 1;
            if self.counter.is_multiple_of(self.stride) || local == total {
                self.push(offset + t, m);
            }
        })?;
        self.offset += duration;
        self.steps += n;
        self.stages.push(duration);
        Ok(state)
    }

    pub(crate) fn finish(mut self, final_state: DensityMatrix) -> SimResult {
        if !self.diagnostics || !self.out.min_eig.is_finite() {
            self.out.min_eig = self.out.min_eig.min(final_state.min_eigenvalue());
        }
        let fidelity = self.out.fidelity.last().copied().unwrap_or(0.0).clamp(0.0, 1.0);
        let overlap_fidelity = final_state.population(self.target).clamp(0.0, 1.0);
        let s = self.out;
        SimResult {
            times: s.times,
            pop_optical: s.pop_optical,
            pop_spin: s.pop_spin,
            pop_mw: s.pop_mw,
            trace_series: s.trace,
            fidelity_running: s.fidelity,
            fidelity,
            overlap_fidelity,
            stage_durations: self.stages,
            steps: self.steps,
            max_trace_deviation: s.max_trace_dev,
            max_hermiticity_error: s.max_herm,
            min_eigenvalue: s.min_eig,
            final_state,
        }
    }
}

/// Evolves `rho0` under `system` for `duration` seconds.
pub fn evolve(
    system: &CompositeQuantumSystem,
    rho0: &DensityMatrix,
    duration: f64,
    options: &EvolveOptions,
) -> Result<SimResult> {
    let mut rec = Recorder::new(system, options.stride, options.diagnostics)?;
    rec.record_initial(rho0);
    let state = rec.stage(system, rho0, duration, options.dt)?;
    Ok(rec.finish(state))
}
