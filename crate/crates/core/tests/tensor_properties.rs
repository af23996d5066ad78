use nalgebra::Vector3;
use onq_core::spin::{EfgTensor, NuclearSpecies};
use onq_core::tensors::{
    c_closed_form, c_tensor_perturbation, d_closed_form, d_tensor_perturbation, fit_response_tensors,
    ElectronicLevelModel, EfgFieldSeries,
};
use onq_core::Complex64;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

const A0: f64 = 0.529_177_210_903;

fn ga69() -> NuclearSpecies {
    NuclearSpecies::new("69Ga", 1.5, 0.171, 10.22).unwrap()
}

/// Random Hermitian model: two occupied levels below a gap, three empty above.
fn random_model(seed: u64) -> ElectronicLevelModel {
    let mut rng = StdRng::seed_from_u64(seed);
    let energies = vec![-0.3, 0.0, 2.0 + rng.random::<f64>(), 2.6 + rng.random::<f64>(), 3.9];
    let occ = vec![1.0, 1.0, 0.0, 0.0, 0.0];
    let mut m = ElectronicLevelModel::empty(energies, occ).unwrap();
    let z = |rng: &mut StdRng| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    for a in 0..5 {
        for b in a + 1..5 {
            for p in 0..3 {
                let v = z(&mut rng);
                m.set_dipole(p, a, b, v);
            }
            for (i, j) in [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)] {
                let v = z(&mut rng) * 3.0;
                m.set_efg(i, j, a, b, v);
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dipole_scaling(seed in 0u64..1000, s in 0.1..5.0f64) {
        let m = random_model(seed);
        let mut ms = m.clone();
        ms.scale_dipoles(s);
        let (c0, _) = c_tensor_perturbation(&m, &ga69(), 0.3).unwrap();
        let (c1, _) = c_tensor_perturbation(&ms, &ga69(), 0.3).unwrap();
        let (d0, _) = d_tensor_perturbation(&m, &ga69(), 0.4, 0.2).unwrap();
        let (d1, _) = d_tensor_perturbation(&ms, &ga69(), 0.4, 0.2).unwrap();
        for i in 0..3 { for j in 0..3 { for p in 0..3 {
            prop_assert!((c1.get(i, j, p) - s * c0.get(i, j, p)).abs() <= 1e-12 * c0.max_abs() * s);
            for q in 0..3 {
                prop_assert!((d1.get(i, j, p, q) - s * s * d0.get(i, j, p, q)).abs() <= 1e-12 * d0.max_abs() * s * s);
            }
        }}}
    }

    #[test]
    fn static_response_is_real(seed in 0u64..1000) {
        let m = random_model(seed);
        let (c, dc) = c_tensor_perturbation(&m, &ga69(), 0.0).unwrap();
        let (d, dd) = d_tensor_perturbation(&m, &ga69(), 0.0, 0.0).unwrap();
        prop_assert!(c.max_abs() > 0.0 && d.max_abs() > 0.0);
        // with η > 0 the residue is O(η/E); it vanishes with η
        let m0 = m.clone().with_eta(0.0).unwrap();
        let (_, dc0) = c_tensor_perturbation(&m0, &ga69(), 0.0).unwrap();
        let (_, dd0) = d_tensor_perturbation(&m0, &ga69(), 0.0, 0.0).unwrap();
        prop_assert!(dc0.imag_residual <= 1e-8, "{}", dc0.imag_residual);
        prop_assert!(dd0.imag_residual <= 1e-8, "{}", dd0.imag_residual);
        prop_assert!(dc.imag_residual < 1e-2 && dd.imag_residual < 1e-2);
    }

    #[test]
    fn exchange_symmetry(seed in 0u64..1000, w1 in 0.0..1.5f64, w2 in 0.0..1.5f64) {
        let m = random_model(seed);
        let (a, _) = d_tensor_perturbation(&m, &ga69(), w1, w2).unwrap();
        let (b, _) = d_tensor_perturbation(&m, &ga69(), w2, w1).unwrap();
        let scale = a.max_abs();
        for i in 0..3 { for j in 0..3 { for p in 0..3 { for q in 0..3 {
            prop_assert!((a.get(i, j, p, q) - b.get(i, j, q, p)).abs() <= 1e-10 * scale);
            prop_assert_eq!(a.get(i, j, p, q), a.get(j, i, p, q));
            prop_assert_eq!(a.get(i, j, p, q), a.get(i, j, q, p));
        }}}}
    }

    #[test]
    fn closed_forms_are_monotone(eg in 0.5..6.0f64, f1 in 0.0..0.98f64, f2 in 0.0..0.98f64) {
        prop_assume!((f1 - f2).abs() > 1e-6);
        let sp = ga69();
        let c1 = c_closed_form(&sp, eg, A0).unwrap();
        let c2 = c_closed_form(&sp, 2.0 * eg, A0).unwrap();
        prop_assert!((c1 / c2 - 2.0).abs() <= 1e-12);
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        prop_assert!(d_closed_form(&sp, eg, hi * eg, A0).unwrap() > d_closed_form(&sp, eg, lo * eg, A0).unwrap());
    }

    #[test]
    fn polynomial_fit_is_exact(
        v0 in -3.0..3.0f64, a in -5.0..5.0f64, b in -20.0..20.0f64,
        axis in 0usize..3, emax in 0.01..0.5f64,
    ) {
        let fields: Vec<Vector3<f64>> = (-3..=3).map(|k| {
            let mut f = Vector3::zeros();
            f[axis] = emax * k as f64 / 3.0;
            f
        }).collect();
        let series = EfgFieldSeries::from_fn(ga69(), fields, |f| {
            let e = f[axis];
            let w = v0 + a * e + b * e * e;
            EfgTensor::from_components(0.0, w, -w, 0.0, 0.0, 0.0)
        }).unwrap();
        let rep = fit_response_tensors(&series, 2).unwrap();
        let fit = rep.fits.iter().find(|f| f.component == (1, 1)).unwrap();
        for (got, want) in fit.coefficients.iter().zip([v0, a, b]) {
            prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{} vs {}", got, want);
        }
    }
}

#[test]
fn table_anchor_inputs_land_in_band() {
    let as75 = NuclearSpecies::new("75As", 1.5, 0.314, 7.315).unwrap();
    let ga = ga69();
    let sb = NuclearSpecies::new("121Sb", 2.5, -0.543, 10.19).unwrap();
    let cl = NuclearSpecies::new("35Cl", 1.5, -0.0817, 4.176).unwrap();
    let within = |x: f64, target: f64, factor: f64| x.abs() / target <= factor && target / x.abs() <= factor;
    assert!(within(c_closed_form(&as75, 1.42, A0).unwrap(), 9.0, 2.0));
    assert!(within(c_closed_form(&ga, 1.42, A0).unwrap(), 7.0, 2.0));
    assert!(within(c_closed_form(&sb, 1.12, A0).unwrap(), 8.0, 2.0));
    assert!(within(c_closed_form(&cl, 5.0, A0).unwrap(), 0.7, 2.0));
    assert!(within(d_closed_form(&ga, 3.4, 3.2, A0).unwrap(), 6.0, 3.0));
    assert!(within(d_closed_form(&as75, 1.42, 1.22, A0).unwrap(), 24.0, 3.0));
    assert!(within(d_closed_form(&sb, 1.12, 0.92, A0).unwrap(), 19.0, 3.0));
}
