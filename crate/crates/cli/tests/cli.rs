use std::path::{Path, PathBuf};
use std::process::Command;

use onq_cli::commands::{self, sweep, trajectory_csv, RunOptions};
use onq_cli::{scenarios, Scenario, ScenarioConfig, SweepSpec};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn bundled(name: &str) -> Scenario {
    scenarios::load(name).unwrap().unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_onq-sim"))
}

fn exit_code(args: &[&str]) -> i32 {
    let out = bin().args(args).env_remove("ONQ_SIM_WORKERS").output().unwrap();
    out.status.code().unwrap()
}

#[test]
fn bundled_scenarios_round_trip_and_run() {
    let opts = RunOptions { stride: Some(1000), workers: Some(2) };
    for name in scenarios::names() {
        let scn = bundled(name);
        let text = scn.config.to_toml().unwrap();
        let back: ScenarioConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, scn.config, "{name}");
        let a: toml::Value = toml::from_str(scenarios::text(name).unwrap()).unwrap();
        let b: toml::Value = toml::from_str(&text).unwrap();
        assert_eq!(a, b, "{name}");
        let kind = scn.config.command.unwrap();
        let report = commands::run(kind, &scn, opts).unwrap();
        assert!(!report.metrics.is_empty(), "{name}");
    }
}

#[test]
fn identical_config_gives_identical_csv() {
    let scn = bundled("fig3a");
    let opts = RunOptions::default();
    let a = commands::simulate(&scn, opts).unwrap();
    let b = commands::simulate(&scn, opts).unwrap();
    assert_eq!(a.files, b.files);
    let s1 = sweep(&bundled("fig3b_sweep"), None, RunOptions { stride: None, workers: Some(1) }).unwrap();
    let s4 = sweep(&bundled("fig3b_sweep"), None, RunOptions { stride: None, workers: Some(4) }).unwrap();
    assert_eq!(s1.files, s4.files);
}

#[test]
fn reversed_sweep_reverses_rows() {
    let scn = bundled("fig3b_sweep");
    let spec = scn.config.sweep.clone().unwrap();
    let mut rev = spec.clone();
    std::mem::swap(&mut rev.min, &mut rev.max);
    let opts = RunOptions { stride: None, workers: Some(3) };
    let fwd = sweep(&scn, Some(&spec), opts).unwrap();
    let bwd = sweep(&scn, Some(&rev), opts).unwrap();
    let rows = |r: &commands::Report| -> Vec<String> {
        r.files[0].1.lines().skip(1).map(str::to_string).collect()
    };
    let mut b = rows(&bwd);
    b.reverse();
    assert_eq!(rows(&fwd), b);
}

#[test]
fn single_value_sweep_matches_simulate() {
    let scn = bundled("fig3a");
    let spec = SweepSpec::from_values("ensemble.relaxation", vec![1.0]);
    let s = sweep(&scn, Some(&spec), RunOptions::default()).unwrap();
    let r = commands::simulate(&scn, RunOptions::default()).unwrap();
    assert_eq!(s.metric("fidelity.0"), r.metric("fidelity"));
}

#[test]
fn unresolvable_sweep_path_is_config_error() {
    let scn = bundled("fig3a");
    let spec = SweepSpec::from_values("ensemble.nope", vec![1.0]);
    let err = sweep(&scn, Some(&spec), RunOptions::default()).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn axial_spin_gap_is_half_the_coupling_constant() {
    let scn = Scenario::load(&fixture("ga69_axial.toml")).unwrap();
    let r = commands::spin(&scn).unwrap();
    let gap = r.metric("delta_ge_MHz_2pi").unwrap();
    let cq = r.metric("cq_MHz").unwrap();
    assert!((gap / (cq / 2.0) - 1.0).abs() <= 1e-9);
    assert!((cq - 1.38).abs() < 0.02);
}

#[test]
fn spin_half_reports_no_quadrupole_structure() {
    let scn = Scenario::load(&fixture("spin_half.toml")).unwrap();
    let r = commands::spin(&scn).unwrap();
    let notices = r.summary["notices"].as_array().unwrap();
    assert!(notices[0].as_str().unwrap().contains("no quadrupole structure"));
    assert!(r.metric("cq_MHz").is_none());
    // pure Zeeman: gap = γB
    assert!((r.metric("delta_ge_MHz_2pi").unwrap() - 42.577).abs() < 1e-9);
}

#[test]
fn tensors_recover_exact_quadratic() {
    let scn = Scenario::load(&fixture("wgan_tensors.toml")).unwrap();
    let r = commands::tensors(&scn).unwrap();
    let fits = r.summary["fit"]["component_fits"].as_array().unwrap();
    let zz = fits.iter().find(|f| f["component"] == "zz").unwrap();
    let c: Vec<f64> = zz["coefficients"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((c[0] - 3.34).abs() <= 1e-10);
    assert!((c[1] - 0.5).abs() <= 1e-10);
    assert!((c[2] - 7.255557363024314).abs() <= 1e-10);
    assert!((r.metric("d.zz.zz").unwrap() - 1.0).abs() <= 1e-9);
    let closed = r.metric("closed_form.d").unwrap();
    assert!(closed / 6.0 <= 3.0 && 6.0 / closed <= 3.0);
    assert!(r.metric("residual_max").unwrap() < 1e-12);
}

#[test]
fn lossless_and_empty_protocols() {
    let r = commands::simulate(&Scenario::load(&fixture("lossless.toml")).unwrap(), RunOptions::default()).unwrap();
    assert!((r.metric("fidelity").unwrap() - 1.0).abs() < 1e-6);
    let r = commands::simulate(&Scenario::load(&fixture("zero_stage.toml")).unwrap(), RunOptions::default()).unwrap();
    assert_eq!(r.metric("fidelity"), Some(0.0));
}

#[test]
fn stride_thins_the_trajectory() {
    let scn = bundled("fig3a");
    let t = onq_cli::resolve::transduction(&scn, Some(10)).unwrap();
    let params = onq_core::dynamics::SwapProtocolParams { system: t.params, schedule: None, options: t.options };
    let r = onq_core::dynamics::run_swap_protocol(&params).unwrap();
    let csv = trajectory_csv(&r);
    assert!(csv.starts_with("t_s,pop_optical,pop_spin,pop_mw,trace,fidelity_running\n"));
    assert!(csv.lines().count() < 60);
}

#[test]
fn feasibility_zero_field_and_missing_material() {
    let mut cfg = bundled("heatingA3").config;
    cfg.laser.as_mut().unwrap().amplitude.value = 0.0;
    let scn = Scenario { config: cfg.clone(), base_dir: ".".into() };
    let r = commands::feasibility(&scn).unwrap();
    for k in ["incident_power_W_per_m2", "absorbed_power_W_per_m2", "temperature_rise_K"] {
        assert_eq!(r.metric(k), Some(0.0), "{k}");
    }
    assert!(r.summary["heating"]["penetration_depth_m"].is_null());
    assert_eq!(r.metric("tunnelling_negligible"), Some(1.0));

    cfg.material = None;
    let err = commands::feasibility(&Scenario { config: cfg, base_dir: ".".into() }).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("[material]"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(exit_code(&["simulate", "--scenario", "fig3a", "--out", out, "--stride", "100"]), 0);
    assert!(dir.path().join("trajectory.csv").exists() && dir.path().join("summary.json").exists());

    let bad = fixture("bad_unit.toml");
    assert_eq!(exit_code(&["simulate", "--config", bad.to_str().unwrap()]), 1);
    assert_eq!(exit_code(&["spin", "--config", "/nonexistent/scenario.toml"]), 3);

    // integrator refusal: a step far above the stability bound
    let scn = dir.path().join("big_dt.toml");
    let head = scenarios::text("fig3a").unwrap().split("[[expect]]").next().unwrap();
    std::fs::write(&scn, format!("{head}\n[integrator]\ndt = {{ value = 1.0, unit = \"us\" }}\n")).unwrap();
    let o = bin().args(["simulate", "--config", scn.to_str().unwrap(), "--out", out]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dt <="));

    // malformed series row: I/O error carrying the line number
    let series = dir.path().join("bad.csv");
    std::fs::write(&series, "# species=69Ga\nEx,Ey,Ez,Vxx,Vyy,Vzz,Vxy,Vxz,Vyz\n0,0,0,1,1,-2,0,0,0\n0,0,x,1,1,-2,0,0,0\n").unwrap();
    std::fs::copy(fixture("nuclides.csv"), dir.path().join("nuclides.csv")).unwrap();
    let cfg = dir.path().join("t.toml");
    std::fs::write(&cfg, "[species]\nlabel = \"69Ga\"\nnuclide_file = \"nuclides.csv\"\n[tensors]\nefg_series = \"bad.csv\"\n").unwrap();
    let o = bin().args(["tensors", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::remove_file(&series).unwrap();
    assert_eq!(exit_code(&["tensors", "--config", cfg.to_str().unwrap()]), 3);
}

#[test]
fn workers_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, flag: Option<&str>, sub: &str| {
        let out = dir.path().join(sub);
        let mut c = bin();
        c.args(["sweep", "--scenario", "fig3b_sweep", "--out", out.to_str().unwrap()]);
        if let Some(f) = flag {
            c.args(["--workers", f]);
        }
        match env {
            Some(e) => c.env("ONQ_SIM_WORKERS", e),
            None => c.env_remove("ONQ_SIM_WORKERS"),
        };
        let status = c.output().unwrap().status.code().unwrap();
        (status, std::fs::read_to_string(out.join("sweep.csv")).ok())
    };
    let (s0, base) = run(None, Some("1"), "a");
    assert_eq!(s0, 0);
    let (s1, env_only) = run(Some("2"), None, "b");
    assert_eq!(s1, 0);
    assert_eq!(env_only, base);
    // an invalid environment value is ignored when the flag is given
    let (s2, flagged) = run(Some("not-a-number"), Some("3"), "c");
    assert_eq!(s2, 0);
    assert_eq!(flagged, base);
}
