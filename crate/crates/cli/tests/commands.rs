mod common;

use std::f64::consts::PI;

use common::{config, ok, resq, table, write_config};
use resq::commands::{build_protocol, run_trajectory};
use resq::config::RunConfig;
use resq_core::dynamics::{run_protocol, steady_state_closed_form, DensityMatrix, SamplingPolicy};
use resq_core::linalg::hermitian_eig;
use resq_core::measures::{bell_fidelity, fidelity_with, free_concurrence, linear_entropy, mems_concurrence_at, BellState};
use resq_core::params::ReservoirParams;
use tempfile::tempdir;

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn steady_sweep_twenty_rows() {
    let dir = tempdir().unwrap();
    let summary = ok(&["steady", "--config", path_str(&config("steady_sweep.json"))], dir.path());
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["rows"], 20);
    let t = table(&dir.path().join("steady_N0.5.csv"));
    assert_eq!(t.rows.len(), 20);
    assert!(t.column("discrepancy").unwrap().iter().all(|&d| d <= 1e-8));
    let m_sq = t.column("M_abs_sq").unwrap();
    assert_eq!(m_sq[0], 0.0);
    assert!((m_sq[19] - 0.75).abs() < 1e-12);
    // every row recomputes from its own (N, fraction, φ)
    for row in &t.rows {
        let rho = steady_state_closed_form(&ReservoirParams::from_squeezing(row[0], row[2], row[3]).unwrap()).unwrap();
        assert!((linear_entropy(&rho).unwrap() - row[4]).abs() <= 1e-12);
        assert!((free_concurrence(&rho).unwrap() - row[5]).abs() <= 1e-12);
        assert!((row[6] - row[4]).abs() <= 1e-8 && (row[7] - row[5]).abs() <= 1e-8);
    }
}

#[test]
fn steady_vacuum_single_row() {
    let dir = tempdir().unwrap();
    ok(&["steady", "--config", path_str(&config("steady_vacuum.json"))], dir.path());
    let t = table(&dir.path().join("steady.csv"));
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.column("S_L_closed").unwrap(), vec![0.0]);
    assert_eq!(t.column("C_free_closed").unwrap(), vec![0.0]);
    assert!(t.meta_value("config_sha256").unwrap().len() == 64);
    assert_eq!(t.meta_value("time_unit"), Some("tau"));
}

#[test]
fn steady_rejects_extended_model() {
    let dir = tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "units": "MHz", "effective": {"beta_r": 1.0, "beta_s": 0.5, "kappa": 50.0},
            "model": {"kind": "extended", "n_max": 3}}"#,
    );
    let o = resq(&["steady", "--config", path_str(&cfg)], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evolve_ideal_reaches_pure_steady_state() {
    let dir = tempdir().unwrap();
    ok(&["evolve", "--config", path_str(&config("evolve_ideal.json"))], dir.path());
    let t = table(&dir.path().join("evolve.csv"));
    assert_eq!(t.columns[..8], ["t", "tau", "S_L", "C_free", "F_phi_plus", "F_phi_minus", "F_psi_plus", "F_psi_minus"]);
    assert_eq!(t.rows.len(), 201);
    let closed = steady_state_closed_form(&ReservoirParams::ideal(5.0, PI).unwrap()).unwrap();
    let last = t.rows.last().unwrap();
    for (k, bell) in BellState::ALL.iter().enumerate() {
        assert!((last[4 + k] - bell_fidelity(&closed, *bell).unwrap()).abs() <= 1e-6);
    }

    // fidelity with the (pure) closed-form state itself
    let cfg = RunConfig::load(&config("evolve_ideal.json")).unwrap();
    let sys = cfg.resolve().unwrap();
    let policy = SamplingPolicy { keep_snapshots: true, ..cfg.sampling.policy() };
    let points = run_protocol(&build_protocol(&cfg, &sys).unwrap(), &policy).unwrap();
    let psi = hermitian_eig(closed.matrix()).unwrap().vectors.column(0);
    let f = fidelity_with(points.last().unwrap().snapshot.as_ref().unwrap(), &psi).unwrap();
    assert!(f >= 1.0 - 1e-6, "endpoint fidelity {f}");
}

#[test]
fn zero_duration_protocol_is_one_row() {
    let dir = tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": 1.0}, "initial": {"theta": 0.7},
            "protocol": [{"kind": "evolve", "duration_tau": 0.0}]}"#,
    );
    ok(&["evolve", "--config", path_str(&cfg)], dir.path());
    let t = table(&dir.path().join("evolve.csv"));
    assert_eq!(t.rows.len(), 1);
    let rho = resq_core::dynamics::rotated_initial_state(0.7).unwrap();
    let row = &t.rows[0];
    assert_eq!((row[0], row[1]), (0.0, 0.0));
    assert!((row[2] - linear_entropy(&rho).unwrap()).abs() <= 1e-15);
    assert!((row[3] - free_concurrence(&rho).unwrap()).abs() <= 1e-15);
}

#[test]
fn phase_decay_protocol_keeps_populations() {
    let cfg = RunConfig::load(&config("evolve_phase_decay.json")).unwrap();
    let sys = cfg.resolve().unwrap();
    let policy = SamplingPolicy { keep_snapshots: true, ..cfg.sampling.policy() };
    let points = run_protocol(&build_protocol(&cfg, &sys).unwrap(), &policy).unwrap();
    let decay: Vec<_> = points.iter().filter(|p| p.segment == 3).collect();
    let pops = |rho: &DensityMatrix| (0..4).map(|i| rho.matrix()[(i, i)].re).collect::<Vec<_>>();
    let first = pops(decay[0].snapshot.as_ref().unwrap());
    for w in decay.windows(2) {
        assert!(w[1].s_l >= w[0].s_l - 1e-12);
        let p = pops(w[1].snapshot.as_ref().unwrap());
        assert!(p.iter().zip(&first).all(|(a, b)| (a - b).abs() <= 1e-10));
    }
    assert!(decay.last().unwrap().s_l > decay[0].s_l + 0.01);
}

#[test]
fn extended_physical_run_records_solved_omega_t() {
    let dir = tempdir().unwrap();
    ok(&["evolve", "--config", path_str(&config("evolve_raman.json"))], dir.path());
    let t = table(&dir.path().join("evolve.csv"));
    assert_eq!(t.meta_value("time_unit"), Some("s"));
    let w: f64 = t.meta_value("omega_t_solved_rad_per_s").unwrap().parse().unwrap();
    assert!((w / (2.0 * PI * 1e6) - 4400f64.sqrt()).abs() < 1e-9);
    assert!((t.rows.last().unwrap()[1] - 5.0).abs() < 1e-9);
    for row in &t.rows {
        assert!((row[4..8].iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn check_report() {
    let dir = tempdir().unwrap();
    let v = ok(&["check", "--config", path_str(&config("check_raman.json"))], dir.path());
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"]["phase_damping_rate"], 0.0);
    let ratio = v["margins"][0]["ratio"].as_f64().unwrap();
    assert!(ratio > 3.0 && ratio < 10.0, "N ≈ 2.27 strong-coupling ratio {ratio}");
    assert!(["pass", "warn", "fail"].contains(&v["verdict"].as_str().unwrap()));
    assert!(dir.path().join("check.json").exists());

    // bad cavity: κ comparable to β
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "units": "MHz", "physical": {
            "g_r": 110, "g_s": 110, "omega_r": 1500, "omega_s": 1200,
            "delta_r": 8000, "delta_s": 8000, "delta_t": 8000,
            "kappa": 14.2, "gamma_r": 5.2, "gamma_s": 5.2, "gamma_t": 5.2}}"#,
    );
    let v = ok(&["check", "--config", path_str(&cfg)], dir.path());
    let margins = v["margins"].as_array().unwrap();
    let beta_r = margins.iter().find(|m| m["name"] == "bad_cavity:kappa/beta_r").unwrap();
    assert_ne!(beta_r["verdict"], "pass");
}

#[test]
fn check_needs_physical_parameters() {
    let dir = tempdir().unwrap();
    let o = resq(&["check", "--config", path_str(&config("steady_vacuum.json"))], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["schema_version"], 1);
    assert_eq!(err["error"]["kind"], "config");
}

#[test]
fn scan_is_deterministic_and_bounded() {
    let dir = tempdir().unwrap();
    let cfg = config("scan_coarse.json");
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(threads);
        let o = std::process::Command::new(env!("CARGO_BIN_EXE_resq"))
            .args(["scan", "--config", path_str(&cfg), "--out", path_str(&out)])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        outputs.push(std::fs::read(out.join("scan.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);

    let t = table(&dir.path().join("1").join("scan.csv"));
    assert_eq!(t.rows.len(), 10 * 5 * 20 * 3);
    let mut below_werner = 0;
    for row in &t.rows {
        let (s, c) = (row[4], row[5]);
        assert!((-1e-12..=1.0 + 1e-12).contains(&s));
        assert!(c <= mems_concurrence_at(s) + 1e-9);
        // Werner line: C = (3√(1 − S_L) − 1)/2
        if c > 0.0 && c <= 0.5 * (3.0 * (1.0 - s).sqrt() - 1.0) + 1e-12 {
            below_werner += 1;
        }
    }
    assert!(below_werner > 100);
}

#[test]
fn single_point_scan_matches_evolve() {
    let dir = tempdir().unwrap();
    let scan = write_config(
        dir.path(),
        r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": 1.0},
            "scan": {"n": [0.7], "m_fraction": [0.6], "tau": [1.3], "theta": [0.9], "phi": 0.5}}"#,
    );
    ok(&["scan", "--config", path_str(&scan)], dir.path());
    let row = table(&dir.path().join("scan.csv")).rows[0].clone();

    let text = r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": 0.7, "m_fraction": 0.6, "phi": 0.5},
        "initial": {"theta": 0.9}, "protocol": [{"kind": "evolve", "duration_tau": 1.3}]}"#;
    let cfg = RunConfig::parse(text).unwrap();
    let last = run_trajectory(&cfg, &cfg.resolve().unwrap()).unwrap().pop().unwrap();
    assert!((last.s_l - row[4]).abs() <= 1e-12 && (last.c_free - row[5]).abs() <= 1e-12);
}

#[test]
fn oversized_scan_exits_2() {
    let dir = tempdir().unwrap();
    let grid: Vec<String> = (0..101).map(|k| format!("{}", k as f64 * 0.01)).collect();
    let list = grid.join(",");
    let cfg = write_config(
        dir.path(),
        &format!(
            r#"{{"schema_version": 1, "units": "MHz", "reservoir": {{"n": 1.0}},
                "scan": {{"n": [{list}], "m_fraction": [{list}], "tau": [{list}], "theta": [0.0]}}}}"#
        ),
    );
    let o = resq(&["scan", "--config", path_str(&cfg)], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("scan.csv").exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempdir().unwrap();
    let bad = write_config(dir.path(), r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": -1.0}}"#);
    let o = resq(&["evolve", "--config", path_str(&bad)], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "parameters");

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(resq(&["evolve", "--config", path_str(&bad)], dir.path()).status.code(), Some(2));
    assert_eq!(resq(&["evolve"], dir.path()).status.code(), Some(2));
    assert_eq!(resq(&["evolve", "--config", "/nonexistent/x.json"], dir.path()).status.code(), Some(2));
    assert_eq!(resq(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn shipped_configs_round_trip() {
    let dir = std::fs::read_dir(config("")).unwrap();
    let mut seen = 0;
    for entry in dir {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let cfg = RunConfig::load(&path).unwrap();
        let again = RunConfig::parse(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again, "{}", path.display());
        assert_eq!(cfg.hash(), again.hash());
        cfg.resolve().unwrap();
        seen += 1;
    }
    assert!(seen >= 8);
}
