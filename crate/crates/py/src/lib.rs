//! Python bindings: `import onq_sim`.
//!
//! Frequencies cross the boundary in rad/s unless the argument name says
//! otherwise, matching the Rust API.

use std::collections::BTreeMap;
use std::path::PathBuf;

use nalgebra::Vector3;
use onq_core::dynamics::{self, EvolveOptions, SwapProtocolParams, DEFAULT_FOCK_DIM};
use onq_core::constants::BOHR_RADIUS;
use onq_core::units::ANGSTROM;
use onq_core::{feasibility, spin, tensors, OnqError};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: OnqError) -> PyErr {
    match e {
        OnqError::Io(_) | OnqError::Parse { .. } => PyIOError::new_err(e.to_string()),
        e if e.is_numerical() => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "NuclearSpecies", module = "onq_sim", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpecies(spin::NuclearSpecies);

#[pymethods]
impl PySpecies {
    #[new]
    #[pyo3(signature = (label, spin, quadrupole_moment_barn, gyromagnetic_mhz_2pi_per_t = 0.0))]
    fn new(label: &str, spin: f64, quadrupole_moment_barn: f64, gyromagnetic_mhz_2pi_per_t: f64) -> PyResult<Self> {
        spin::NuclearSpecies::new(label, spin, quadrupole_moment_barn, gyromagnetic_mhz_2pi_per_t)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn label(&self) -> &str {
        &self.0.label
    }

    #[getter]
    fn spin(&self) -> f64 {
        self.0.spin_i
    }

    #[getter]
    fn quadrupole_moment_barn(&self) -> f64 {
        self.0.quadrupole_moment_barn
    }

    #[getter]
    fn gyromagnetic_mhz_2pi_per_t(&self) -> f64 {
        self.0.gyromagnetic_mhz_2pi_per_t
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn __repr__(&self) -> String {
        format!("NuclearSpecies({:?}, spin={}, q={} b)", self.0.label, self.0.spin_i, self.0.quadrupole_moment_barn)
    }
}

/// Traceless symmetric EFG tensor in V/Å².
#[pyclass(name = "EfgTensor", module = "onq_sim", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyEfg(spin::EfgTensor);

#[pymethods]
impl PyEfg {
    #[new]
    #[pyo3(signature = (xx, yy, zz, xy = 0.0, xz = 0.0, yz = 0.0))]
    fn new(xx: f64, yy: f64, zz: f64, xy: f64, xz: f64, yz: f64) -> PyResult<Self> {
        spin::EfgTensor::from_components(xx, yy, zz, xy, xz, yz).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn axial(vzz: f64) -> Self {
        Self(spin::EfgTensor::axial(vzz))
    }

    #[getter]
    fn vzz(&self) -> f64 {
        self.0.vzz()
    }

    #[getter]
    fn asymmetry(&self) -> f64 {
        self.0.asymmetry()
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        let m = self.0.matrix();
        (0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect()).collect()
    }
}

/// Eigenvalues (rad/s, ascending) of the Zeeman + quadrupole Hamiltonian.
#[pyfunction]
#[pyo3(signature = (species, efg, b_field = (0.0, 0.0, 0.0)))]
fn spin_levels(species: &PySpecies, efg: &PyEfg, b_field: (f64, f64, f64)) -> PyResult<Vec<f64>> {
    let sp = &species.0;
    let quad = if sp.spin_i > 0.5 {
        spin::quadrupole_tensor(sp, &efg.0).map_err(py_err)?
    } else {
        spin::QuadrupoleTensor::zero()
    };
    let ops = spin::spin_operators(sp.spin_i).map_err(py_err)?;
    let b = Vector3::new(b_field.0, b_field.1, b_field.2);
    let h = spin::static_hamiltonian(sp, &b, &quad, &ops).map_err(py_err)?;
    Ok(spin::spin_levels(&h).map_err(py_err)?.energies().to_vec())
}

/// C_q = eqV_zz/h in Hz.
#[pyfunction]
fn quadrupole_coupling_constant(species: &PySpecies, efg: &PyEfg) -> f64 {
    spin::quadrupole_coupling_constant(&species.0, &efg.0)
}

/// First-order response estimate, 2π·MHz/(V/Å). `a0` defaults to the Bohr
/// radius.
#[pyfunction]
#[pyo3(signature = (species, e_gap_ev, a0_angstrom = None))]
fn c_closed_form(species: &PySpecies, e_gap_ev: f64, a0_angstrom: Option<f64>) -> PyResult<f64> {
    let a0 = a0_angstrom.unwrap_or(BOHR_RADIUS / ANGSTROM);
    tensors::c_closed_form(&species.0, e_gap_ev, a0).map_err(py_err)
}

/// Second-order response estimate, 2π·MHz/(V/Å)².
#[pyfunction]
#[pyo3(signature = (species, e_gap_ev, pump_ev, a0_angstrom = None))]
fn d_closed_form(species: &PySpecies, e_gap_ev: f64, pump_ev: f64, a0_angstrom: Option<f64>) -> PyResult<f64> {
    let a0 = a0_angstrom.unwrap_or(BOHR_RADIUS / ANGSTROM);
    tensors::d_closed_form(&species.0, e_gap_ev, pump_ev, a0).map_err(py_err)
}

/// Couplings and loss rates of the transduction model, rad/s.
#[pyclass(name = "TransductionParams", module = "onq_sim", get_all, set_all, skip_from_py_object)]
#[derive(Clone)]
struct PyParams {
    g_optical: f64,
    g_mw: f64,
    kappa_optical: f64,
    kappa_mw: f64,
    gamma_n: f64,
    optical_dim: usize,
    mw_dim: usize,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (g_optical, g_mw, kappa_optical = 0.0, kappa_mw = 0.0, gamma_n = 0.0, optical_dim = DEFAULT_FOCK_DIM, mw_dim = DEFAULT_FOCK_DIM))]
    fn new(
        g_optical: f64,
        g_mw: f64,
        kappa_optical: f64,
        kappa_mw: f64,
        gamma_n: f64,
        optical_dim: usize,
        mw_dim: usize,
    ) -> Self {
        Self { g_optical, g_mw, kappa_optical, kappa_mw, gamma_n, optical_dim, mw_dim }
    }
}

impl PyParams {
    fn core(&self) -> dynamics::TransductionParams {
        dynamics::TransductionParams {
            g_optical: self.g_optical,
            g_mw: self.g_mw,
            delta: 0.0,
            kappa_optical: self.kappa_optical,
            kappa_mw: self.kappa_mw,
            gamma_n: self.gamma_n,
            optical_dim: self.optical_dim,
            mw_dim: self.mw_dim,
        }
    }
}

#[pyclass(name = "SimResult", module = "onq_sim", get_all, frozen, skip_from_py_object)]
struct PySimResult {
    times: Vec<f64>,
    pop_optical: Vec<f64>,
    pop_spin: Vec<f64>,
    pop_mw: Vec<f64>,
    trace: Vec<f64>,
    fidelity_running: Vec<f64>,
    fidelity: f64,
    overlap_fidelity: f64,
    stage_durations: Vec<f64>,
    steps: usize,
    max_trace_deviation: f64,
    max_hermiticity_error: f64,
    min_eigenvalue: f64,
}

impl From<dynamics::SimResult> for PySimResult {
    fn from(r: dynamics::SimResult) -> Self {
        Self {
            times: r.times,
            pop_optical: r.pop_optical,
            pop_spin: r.pop_spin,
            pop_mw: r.pop_mw,
            trace: r.trace_series,
            fidelity_running: r.fidelity_running,
            fidelity: r.fidelity,
            overlap_fidelity: r.overlap_fidelity,
            stage_durations: r.stage_durations,
            steps: r.steps,
            max_trace_deviation: r.max_trace_deviation,
            max_hermiticity_error: r.max_hermiticity_error,
            min_eigenvalue: r.min_eigenvalue,
        }
    }
}

/// Sequential optical → spin → microwave swap. `stages` is a list of
/// `(optical_on, mw_on, duration_s)`; `None` uses π/(2G) pulses.
#[pyfunction]
#[pyo3(signature = (params, stages = None, dt = None, stride = 1))]
fn run_swap_protocol(
    py: Python<'_>,
    params: &PyParams,
    stages: Option<Vec<(bool, bool, f64)>>,
    dt: Option<f64>,
    stride: usize,
) -> PyResult<PySimResult> {
    let schedule = match stages {
        Some(s) => {
            let stages = s
                .into_iter()
                .map(|(optical_on, mw_on, duration)| dynamics::ProtocolStage { optical_on, mw_on, duration })
                .collect();
            Some(dynamics::ProtocolSchedule::new(stages).map_err(py_err)?)
        }
        None => None,
    };
    let p = SwapProtocolParams {
        system: params.core(),
        schedule,
        options: EvolveOptions { dt, stride, diagnostics: true },
    };
    let r = py.detach(|| dynamics::run_swap_protocol(&p)).map_err(py_err)?;
    Ok(r.into())
}

/// |F(2·truncation) − F(truncation)| for the default swap schedule.
#[pyfunction]
fn truncation_sensitivity(py: Python<'_>, params: &PyParams) -> PyResult<f64> {
    let p = SwapProtocolParams::new(params.core());
    py.detach(|| dynamics::truncation_sensitivity(&p)).map_err(py_err)
}

#[pyfunction]
fn rabi_efficiency(f_rabi: f64, detune: f64, kappa1: f64, kappa2: f64) -> PyResult<f64> {
    feasibility::rabi_efficiency(f_rabi, detune, kappa1, kappa2).map_err(py_err)
}

/// Runs a scenario file's command; returns `(metrics, summary_json)`.
///
/// `command` overrides the scenario's own `command` key.
#[pyfunction]
#[pyo3(signature = (path, command = None))]
fn run_scenario(py: Python<'_>, path: PathBuf, command: Option<&str>) -> PyResult<(BTreeMap<String, f64>, String)> {
    use onq_cli::{CliError, CommandKind};
    let cli_err = |e: CliError| match e {
        CliError::Io(_) => PyIOError::new_err(e.to_string()),
        CliError::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    };
    let scn = onq_cli::Scenario::load(&path).map_err(cli_err)?;
    let kind = match command {
        Some(c) => match c {
            "spin" => CommandKind::Spin,
            "tensors" => CommandKind::Tensors,
            "simulate" => CommandKind::Simulate,
            "sweep" => CommandKind::Sweep,
            "feasibility" => CommandKind::Feasibility,
            other => return Err(PyValueError::new_err(format!("unknown command `{other}`"))),
        },
        None => scn
            .config
            .command
            .ok_or_else(|| PyValueError::new_err("scenario has no `command`; pass one explicitly"))?,
    };
    let report = py.detach(|| onq_cli::run(kind, &scn, Default::default())).map_err(cli_err)?;
    Ok((report.metrics, report.summary.to_string()))
}

#[pymodule]
fn onq_sim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpecies>()?;
    m.add_class::<PyEfg>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PySimResult>()?;
    m.add_function(wrap_pyfunction!(spin_levels, m)?)?;
    m.add_function(wrap_pyfunction!(quadrupole_coupling_constant, m)?)?;
    m.add_function(wrap_pyfunction!(c_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(d_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(run_swap_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(truncation_sensitivity, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_efficiency, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_run_on_resonance() {
        let p = PyParams::new(1.0, 2.0, 3.0, 4.0, 5.0, 3, 4);
        let c = p.core();
        assert_eq!(c.delta, 0.0);
        assert_eq!((c.g_optical, c.g_mw, c.kappa_optical, c.kappa_mw, c.gamma_n), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert_eq!((c.optical_dim, c.mw_dim), (3, 4));
        assert!(c.validate().is_ok());
    }
}
