//! Polynomial fits of EFG-vs-field series to extract C and D.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::units::MHZ_2PI;
use crate::{OnqError, Result};

use super::{EfgFieldSeries, NerTensorC, OnqTensorD, EFG_COMPONENTS, EFG_COMPONENT_NAMES};

/// Cartesian axis of an applied field or a mirror plane normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z"][self.index()]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = OnqError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(OnqError::invalid(format!("unknown axis `{s}`"))),
        }
    }
}

/// Fit of one EFG component against one field axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentFit {
    /// (i, j) with i ≤ j.
    pub component: (usize, usize),
    pub axis: Axis,
    /// Monomial coefficients a_0 … a_n of V_ij(ℰ) in V/Å² per (V/Å)^k.
    pub coefficients: Vec<f64>,
    /// One-sigma uncertainties of `coefficients` (zero for exact fits).
    pub std_errors: Vec<f64>,
    /// Euclidean norm of the residuals, V/Å².
    pub residual_norm: f64,
}

/// Mixed-derivative fit of one component over a two-axis sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossFit {
    pub component: (usize, usize),
    pub axes: (Axis, Axis),
    /// ∂²V_ij/∂ℰ_p∂ℰ_q, V/Å² per (V/Å)².
    pub mixed_coefficient: f64,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub c: NerTensorC,
    pub d: OnqTensorD,
    /// Axes that were swept; entries of C and D along other axes are zero.
    pub axes: Vec<Axis>,
    pub fits: Vec<ComponentFit>,
    pub cross_fits: Vec<CrossFit>,
}

/// Result of a least-squares solve in monomial form.
struct PolyFit {
    coefficients: Vec<f64>,
    std_errors: Vec<f64>,
    residual_norm: f64,
}

/// Solves the normal equations of `design · β ≈ y`, rejecting rank-deficient
/// systems.
fn normal_equations(design: &DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>, f64)> {
    let ata = design.transpose() * design;
    let eig = SymmetricEigen::new(ata.clone());
    let max = eig.eigenvalues.amax();
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min <= 1e-12 * max {
        return Err(OnqError::FitFailure(format!(
            "design matrix is rank deficient (eigenvalue ratio {:e})",
            min / max
        )));
    }
    let chol = ata
        .cholesky()
        .ok_or_else(|| OnqError::FitFailure("normal matrix is not positive definite".into()))?;
    let beta = chol.solve(&(design.transpose() * y));
    let resid = y - design * &beta;
    Ok((beta, chol.inverse(), resid.norm()))
}

/// Polynomial fit with the abscissa centred and scaled to [−1, 1], then
/// re-expanded in powers of the raw abscissa.
fn poly_fit(x: &[f64], y: &[f64], order: usize) -> Result<PolyFit> {
    let n = x.len();
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let center = 0.5 * (lo + hi);
    let scale = 0.5 * (hi - lo);
    if !(scale > 0.0) {
        return Err(OnqError::FitFailure("field values do not vary".into()));
    }
    let design = DMatrix::from_fn(n, order + 1, |r, k| ((x[r] - center) / scale).powi(k as i32));
    let yv = DVector::from_column_slice(y);
    let (beta, inv, resid) = normal_equations(&design, &yv)?;

    // β_k ((x − c)/s)^k = Σ_j T_jk x^j with T_jk = binom(k, j) (−c)^(k−j) / s^k
    let mut t = DMatrix::zeros(order + 1, order + 1);
    for k in 0..=order {
        let mut binom = 1.0;
        for j in 0..=k {
            t[(j, k)] = binom * (-center).powi((k - j) as i32) / scale.powi(k as i32);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    let coeffs = &t * &beta;
    let dof = n.saturating_sub(order + 1);
    let sigma2 = if dof > 0 { resid * resid / dof as f64 } else { 0.0 };
    let cov = &t * inv * t.transpose() * sigma2;
    Ok(PolyFit {
        coefficients: coeffs.iter().copied().collect(),
        std_errors: (0..=order).map(|k| cov[(k, k)].max(0.0).sqrt()).collect(),
        residual_norm: resid,
    })
}

fn on_axis(f: &nalgebra::Vector3<f64>, p: usize, tol: f64) -> bool {
    (0..3).filter(|&k| k != p).all(|k| f[k].abs() <= tol)
}

fn distinct(xs: &mut Vec<f64>, tol: f64) -> usize {
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= tol);
    xs.len()
}

/// Samples along axis `p` (other components zero): (ℰ_p, sample index).
fn axis_points(series: &EfgFieldSeries, p: usize, tol: f64) -> Vec<(f64, usize)> {
    series
        .samples()
        .iter()
        .enumerate()
        .filter(|(_, s)| on_axis(&s.field, p, tol))
        .map(|(k, s)| (s.field[p], k))
        .collect()
}

fn field_tolerance(series: &EfgFieldSeries) -> f64 {
    let max = series.samples().iter().map(|s| s.field.amax()).fold(0.0, f64::max);
    1e-12 * max.max(f64::MIN_POSITIVE)
}

/// Fits each EFG component against each swept field axis.
///
/// An axis counts as swept when the series contains points with a non-zero
/// field along it and zero along the other two. `fit_order` is 2 or 3.
/// C^p = K·a₁ and D^pp = K·2a₂ with K = eq/(2I(2I−1)); D^pq for p ≠ q comes
/// from a bivariate quadratic over points in the (p, q) plane when present.
pub fn fit_response_tensors(series: &EfgFieldSeries, fit_order: usize) -> Result<FitReport> {
    if !(2..=3).contains(&fit_order) {
        return Err(OnqError::invalid("fit order must be 2 or 3"));
    }
    let k = series.species().efg_to_angular()? / MHZ_2PI;
    let tol = field_tolerance(series);
    let samples = series.samples();

    let mut axes = Vec::new();
    let mut fits = Vec::new();
    let mut c = NerTensorC::zero();
    let mut d = OnqTensorD::zero();
    for axis in Axis::ALL {
        let p = axis.index();
        let pts = axis_points(series, p, tol);
        if !pts.iter().any(|(e, _)| e.abs() > tol) {
            continue;
        }
        let mut xs: Vec<f64> = pts.iter().map(|(e, _)| *e).collect();
        let nd = distinct(&mut xs, tol);
        if nd < fit_order + 1 {
            return Err(OnqError::invalid(format!(
                "axis {axis} has {nd} distinct field values; order {fit_order} needs {}",
                fit_order + 1
            )));
        }
        axes.push(axis);
        let x: Vec<f64> = pts.iter().map(|(e, _)| *e).collect();
        for &(i, j) in EFG_COMPONENTS.iter() {
            let y: Vec<f64> = pts.iter().map(|&(_, s)| samples[s].efg.matrix()[(i, j)]).collect();
            let pf = poly_fit(&x, &y, fit_order)?;
            c.set(i, j, p, k * pf.coefficients[1]);
            d.set(i, j, p, p, k * 2.0 * pf.coefficients[2]);
            fits.push(ComponentFit {
                component: (i, j),
                axis,
                coefficients: pf.coefficients,
                std_errors: pf.std_errors,
                residual_norm: pf.residual_norm,
            });
        }
    }
    if axes.is_empty() {
        return Err(OnqError::invalid("series contains no single-axis field sweep"));
    }

    let mut cross_fits = Vec::new();
    for (a, &pa) in axes.iter().enumerate() {
        for &qa in &axes[a + 1..] {
            let (p, q) = (pa.index(), qa.index());
            let r = 3 - p - q;
            let plane: Vec<usize> = (0..samples.len()).filter(|&s| samples[s].field[r].abs() <= tol).collect();
            let off_axis = plane
                .iter()
                .filter(|&&s| samples[s].field[p].abs() > tol && samples[s].field[q].abs() > tol)
                .count();
            if off_axis == 0 {
                continue;
            }
            let sp = plane.iter().map(|&s| samples[s].field[p].abs()).fold(0.0, f64::max);
            let sq = plane.iter().map(|&s| samples[s].field[q].abs()).fold(0.0, f64::max);
            let design = DMatrix::from_fn(plane.len(), 6, |row, col| {
                let f = &samples[plane[row]].field;
                let (x, y) = (f[p] / sp, f[q] / sq);
                [1.0, x, y, x * x, y * y, x * y][col]
            });
            for &(i, j) in EFG_COMPONENTS.iter() {
                let yv = DVector::from_iterator(plane.len(), plane.iter().map(|&s| samples[s].efg.matrix()[(i, j)]));
                let (beta, _, resid) = normal_equations(&design, &yv)?;
                let mixed = beta[5] / (sp * sq);
                d.set(i, j, p, q, k * mixed);
                cross_fits.push(CrossFit { component: (i, j), axes: (pa, qa), mixed_coefficient: mixed, residual_norm: resid });
            }
        }
    }

    Ok(FitReport { c, d, axes, fits, cross_fits })
}

/// Mirror-symmetry verdict for one EFG component.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorComponent {
    pub component: (usize, usize),
    pub name: &'static str,
    /// The mirror forces ∂V_ij/∂ℰ_axis = 0 at zero field.
    pub linear_must_vanish: bool,
    /// Fitted ∂V_ij/∂ℰ_axis, V/Å² per V/Å.
    pub linear_coefficient: f64,
    /// Bound used to call the linear coefficient zero.
    pub tolerance: f64,
    /// False only when a forbidden linear response exceeds `tolerance`.
    pub respected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MirrorReport {
    pub axis: Axis,
    pub components: Vec<MirrorComponent>,
}

impl MirrorReport {
    /// Number of components whose linear response is symmetry-forbidden.
    pub fn forbidden_count(&self) -> usize {
        self.components.iter().filter(|c| c.linear_must_vanish).count()
    }

    pub fn all_respected(&self) -> bool {
        self.components.iter().all(|c| c.respected)
    }
}

/// Checks the linear field response along `mirror_axis` against the mirror
/// perpendicular to that axis.
///
/// Under the reflection V_ij picks up s_i·s_j (s = −1 on the mirror axis);
/// when that product is +1 the component is even in ℰ_axis and its linear
/// coefficient must vanish.
pub fn mirror_symmetry_report(series: &EfgFieldSeries, mirror_axis: Axis) -> Result<MirrorReport> {
    let a = mirror_axis.index();
    let tol = field_tolerance(series);
    let pts = axis_points(series, a, tol);
    let paired = pts
        .iter()
        .any(|(e, _)| e.abs() > tol && pts.iter().any(|(f, _)| (e + f).abs() <= tol));
    if !paired {
        return Err(OnqError::invalid(format!("no ±ℰ pair along {mirror_axis}")));
    }
    let mut xs: Vec<f64> = pts.iter().map(|(e, _)| *e).collect();
    let order = (distinct(&mut xs, tol) - 1).min(2);
    let x: Vec<f64> = pts.iter().map(|(e, _)| *e).collect();
    let samples = series.samples();

    let mut components = Vec::with_capacity(6);
    for (n, &(i, j)) in EFG_COMPONENTS.iter().enumerate() {
        let s = |k: usize| if k == a { -1.0 } else { 1.0 };
        let must_vanish = s(i) * s(j) > 0.0;
        let y: Vec<f64> = pts.iter().map(|&(_, k)| samples[k].efg.matrix()[(i, j)]).collect();
        let pf = poly_fit(&x, &y, order)?;
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())) / x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tolerance = (3.0 * pf.std_errors[1]).max(1e-10 * scale.max(1.0));
        let lin = pf.coefficients[1];
        components.push(MirrorComponent {
            component: (i, j),
            name: EFG_COMPONENT_NAMES[n],
            linear_must_vanish: must_vanish,
            linear_coefficient: lin,
            tolerance,
            respected: !must_vanish || lin.abs() <= tolerance,
        });
    }
    Ok(MirrorReport { axis: mirror_axis, components })
}
