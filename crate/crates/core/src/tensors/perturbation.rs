//! Sum-over-states estimators of the C and D tensors.
//!
//! The raw sums are accumulated in "field-derivative" units: with energies in
//! eV, `[r]` in Å and `[V]` in V/Å², `Σ f V r / E` is ∂V/∂ℰ in
//! (V/Å²)/(V/Å) and the triple sum is ∂²V/∂ℰ² in (V/Å²)/(V/Å)². Multiplying
//! by `e·q/(2I(2I−1))` then yields the quadrupole response.

use crate::spin::NuclearSpecies;
use crate::units::MHZ_2PI;
use crate::{Complex64, OnqError, Result};

use super::{ElectronicLevelModel, NerTensorC, OnqTensorD, EFG_COMPONENTS};

/// What the estimators discarded or could not use.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PerturbationDiagnostics {
    /// Largest |Im| over the largest |Re| across all entries.
    pub imag_residual: f64,
    /// Terms dropped because a denominator fell below 10·η.
    pub skipped_terms: usize,
}

/// Resolves one energy denominator `x + iη`. `None` means the term is dropped.
struct Denominators {
    eta: f64,
    skipped: usize,
}

impl Denominators {
    fn new(eta: f64) -> Self {
        Self { eta, skipped: 0 }
    }

    fn inverse(&mut self, x: f64) -> Result<Option<Complex64>> {
        let d = Complex64::new(x, self.eta);
        if self.eta == 0.0 {
            if x.abs() < 1e-12 {
                return Err(OnqError::Singularity(format!(
                    "resonant denominator {x:e} eV with η = 0"
                )));
            }
        } else if d.norm() < 10.0 * self.eta {
            self.skipped += 1;
            return Ok(None);
        }
        Ok(Some(d.inv()))
    }
}

fn check_frequency(w: f64, name: &str) -> Result<()> {
    if !(w >= 0.0 && w.is_finite()) {
        return Err(OnqError::invalid(format!("{name} must be finite and non-negative")));
    }
    Ok(())
}

fn diagnostics(values: impl Iterator<Item = Complex64>, skipped: usize) -> PerturbationDiagnostics {
    let (re, im) = values.fold((0.0f64, 0.0f64), |(r, i), z| (r.max(z.re.abs()), i.max(z.im.abs())));
    let imag_residual = if re > 0.0 { im / re } else if im > 0.0 { f64::INFINITY } else { 0.0 };
    if skipped > 0 {
        log::warn!("{skipped} near-resonant terms dropped from the sum-over-states");
    }
    PerturbationDiagnostics { imag_residual, skipped_terms: skipped }
}

/// First-order NER tensor
/// `C_ij^p(ω) = e²q/(2I(2I−1)) Σ_mn f_nm [V_ij]_nm [r_p]_mn / (E_mn − ω + iη)`.
///
/// `omega` is the drive photon energy in eV; the real part is returned.
pub fn c_tensor_perturbation(
    model: &ElectronicLevelModel,
    species: &NuclearSpecies,
    omega: f64,
) -> Result<(NerTensorC, PerturbationDiagnostics)> {
    check_frequency(omega, "omega")?;
    let k = species.efg_to_angular()? / MHZ_2PI;
    let n = model.n_levels();
    let e = model.energies();
    let f = model.occupations();
    let mut den = Denominators::new(model.eta());

    let mut raw = [[Complex64::new(0.0, 0.0); 3]; 6];
    for m in 0..n {
        for nn in 0..n {
            let f_nm = f[nn] - f[m];
            if m == nn || f_nm == 0.0 {
                continue;
            }
            let mut numer = [[Complex64::new(0.0, 0.0); 3]; 6];
            let mut any = false;
            for (c, &(i, j)) in EFG_COMPONENTS.iter().enumerate() {
                let v = model.efg(i, j)[(nn, m)];
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for p in 0..3 {
                    let r = model.dipole(p)[(m, nn)];
                    numer[c][p] = v * r * f_nm;
                    any |= r != Complex64::new(0.0, 0.0);
                }
            }
            if !any {
                continue;
            }
            let Some(inv) = den.inverse(e[m] - e[nn] - omega)? else { continue };
            for c in 0..6 {
                for p in 0..3 {
                    raw[c][p] += numer[c][p] * inv;
                }
            }
        }
    }

    let mut out = NerTensorC::zero();
    for (c, &(i, j)) in EFG_COMPONENTS.iter().enumerate() {
        for p in 0..3 {
            out.set(i, j, p, k * raw[c][p].re);
        }
    }
    let diag = diagnostics(raw.iter().flatten().copied(), den.skipped);
    Ok((out, diag))
}

/// One ordering of the three-band sum for fixed (p, ω_a) and (q, ω_b).
fn three_band_sum(
    model: &ElectronicLevelModel,
    i: usize,
    j: usize,
    p: usize,
    q: usize,
    w_a: f64,
    w_b: f64,
    den: &mut Denominators,
) -> Result<Complex64> {
    let n = model.n_levels();
    let e = model.energies();
    let f = model.occupations();
    let v = model.efg(i, j);
    let rp = model.dipole(p);
    let rq = model.dipole(q);
    let zero = Complex64::new(0.0, 0.0);
    let mut total = zero;

    for m in 0..n {
        for nn in 0..n {
            let v_mn = v[(m, nn)];
            if m == nn || v_mn == zero {
                continue;
            }
            let mut brace = zero;
            let mut touched = false;
            for l in 0..n {
                let f_lm = f[l] - f[m];
                if f_lm != 0.0 {
                    let num = rp[(nn, l)] * rq[(l, m)] * f_lm;
                    if num != zero {
                        touched = true;
                        if let Some(inv) = den.inverse(e[m] - e[l] - w_b)? {
                            brace += num * inv;
                        }
                    }
                }
                let f_nl = f[nn] - f[l];
                if f_nl != 0.0 {
                    let num = rq[(nn, l)] * rp[(l, m)] * f_nl;
                    if num != zero {
                        touched = true;
                        if let Some(inv) = den.inverse(e[l] - e[nn] - w_b)? {
                            brace -= num * inv;
                        }
                    }
                }
            }
            if !touched {
                continue;
            }
            if let Some(inv) = den.inverse(e[m] - e[nn] - (w_a - w_b))? {
                total += v_mn * inv * brace;
            }
        }
    }
    Ok(total)
}

/// Second-order ONQ tensor from the three-band sum-over-states, including the
/// `(p, ω₁) ↔ (q, ω₂)` exchange term. Frequencies in eV; the real part is
/// returned, explicitly symmetrised in (p, q).
pub fn d_tensor_perturbation(
    model: &ElectronicLevelModel,
    species: &NuclearSpecies,
    omega1: f64,
    omega2: f64,
) -> Result<(OnqTensorD, PerturbationDiagnostics)> {
    check_frequency(omega1, "omega1")?;
    check_frequency(omega2, "omega2")?;
    let k = species.efg_to_angular()? / MHZ_2PI;
    let mut den = Denominators::new(model.eta());

    let mut raw = [[[Complex64::new(0.0, 0.0); 3]; 3]; 6];
    for (c, &(i, j)) in EFG_COMPONENTS.iter().enumerate() {
        for p in 0..3 {
            for q in 0..3 {
                let direct = three_band_sum(model, i, j, p, q, omega1, omega2, &mut den)?;
                let exchanged = three_band_sum(model, i, j, q, p, omega2, omega1, &mut den)?;
                raw[c][p][q] = direct + exchanged;
            }
        }
    }

    let mut out = OnqTensorD::zero();
    for (c, &(i, j)) in EFG_COMPONENTS.iter().enumerate() {
        for p in 0..3 {
            for q in p..3 {
                let sym = 0.5 * (raw[c][p][q] + raw[c][q][p]);
                out.set(i, j, p, q, k * sym.re);
            }
        }
    }
    let diag = diagnostics(raw.iter().flatten().flatten().copied(), den.skipped);
    Ok((out, diag))
}
