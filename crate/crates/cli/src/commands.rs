use std::path::{Path, PathBuf};

use rayon::prelude::*;
use resq_core::dynamics::{
    evolve_states, rotated_initial_state, run_protocol, steady_state_closed_form, steady_state_numeric, DensityMatrix, EvolveOptions,
    Method, ProtocolSegment, SteadyOptions, TrajectoryPoint,
};
use resq_core::generators::{reduced_generator, GeneratorSpec};
use resq_core::linalg::ComplexMatrix;
use resq_core::measures::{bell_fidelity, free_concurrence, linear_entropy, BellState};
use resq_core::params::{regime_report, ReservoirParams};
use serde_json::{json, Value};

use crate::config::{named_unitary, ModelConfig, RunConfig, SegmentConfig, System, SCHEMA_VERSION};
use crate::error::CliError;
use crate::output::{system_meta, trajectory_table, CsvTable};

/// Largest scan grid accepted.
pub const MAX_SCAN_POINTS: usize = 1_000_000;

pub const STEADY_COLUMNS: [&str; 11] = [
    "N",
    "M_abs_sq",
    "m_fraction",
    "phi",
    "S_L_closed",
    "C_free_closed",
    "S_L_numeric",
    "C_free_numeric",
    "discrepancy",
    "F_phi_plus",
    "F_psi_minus",
];

pub const SCAN_COLUMNS: [&str; 6] = ["N", "m_fraction", "tau", "theta", "S_L", "C_free"];

pub fn summary(command: &str, hash: &str, files: &[PathBuf], extra: Value) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config_sha256": hash,
        "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    v
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value).expect("json serializes");
    std::fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// One steady-state row: closed form against numeric relaxation.
pub fn steady_row(r: &ReservoirParams, m_fraction: f64, phi: f64) -> Result<Vec<f64>, CliError> {
    let closed = steady_state_closed_form(r)?;
    let g = reduced_generator(r)?;
    let numeric = steady_state_numeric(&g, &DensityMatrix::basis("00")?, &SteadyOptions::default())?;
    Ok(vec![
        r.n,
        r.m.norm_sqr(),
        m_fraction,
        phi,
        linear_entropy(&closed)?,
        free_concurrence(&closed)?,
        linear_entropy(&numeric)?,
        free_concurrence(&numeric)?,
        closed.matrix().max_abs_diff(numeric.matrix()),
        bell_fidelity(&closed, BellState::PhiPlus)?,
        bell_fidelity(&closed, BellState::PsiMinus)?,
    ])
}

/// |M|² fractions for a sweep of `points` values over [0, 1]; a single point at N = 0.
pub fn sweep_fractions(n: f64, points: usize) -> Vec<f64> {
    if n == 0.0 || points <= 1 {
        return vec![if n == 0.0 { 0.0 } else { 1.0 }];
    }
    (0..points).map(|k| k as f64 / (points - 1) as f64).collect()
}

pub fn steady_sweep_table(n: f64, points: usize, phi: f64) -> Result<CsvTable, CliError> {
    let mut table = CsvTable::new(&STEADY_COLUMNS);
    for f in sweep_fractions(n, points) {
        table.push(steady_row(&ReservoirParams::from_squeezing(n, f, phi)?, f, phi)?);
    }
    Ok(table)
}

fn require_reduced(sys: &System, what: &str) -> Result<(), CliError> {
    if sys.model != ModelConfig::Reduced {
        return Err(CliError::Config(format!("{what} needs the reduced model")));
    }
    Ok(())
}

pub fn cmd_steady(cfg: &RunConfig, out: &Path) -> Result<Value, CliError> {
    let sys = cfg.resolve()?;
    require_reduced(&sys, "steady")?;
    let hash = cfg.hash();
    let mut files = Vec::new();
    let mut rows = 0;
    let mut worst: f64 = 0.0;
    let mut emit = |table: CsvTable, name: &str| -> Result<(), CliError> {
        rows += table.rows.len();
        worst = table.rows.iter().fold(worst, |w, r| w.max(r[8]));
        files.push(table.write(out, name)?);
        Ok(())
    };
    match &cfg.steady {
        Some(sweep) => {
            for &n in &sweep.n {
                let table = steady_sweep_table(n, sweep.m_points, sweep.phi)?
                    .meta("command", "steady")
                    .meta("role", "steady-sweep")
                    .meta("config_sha256", hash.clone())
                    .meta("curve", format!("N={n}"));
                emit(table, &format!("steady_N{n}.csv"))?;
            }
        }
        None => {
            // the closed form has no phase damping term
            if sys.reservoir.phase_damping_rate() != 0.0 {
                return Err(CliError::Config("steady compares against a closed form that needs eta_sq = 0 or n_bar = 0".into()));
            }
            let mut table = system_meta(CsvTable::new(&STEADY_COLUMNS).meta("command", "steady").meta("role", "steady-sweep"), &sys, &hash);
            let r = &sys.reservoir;
            let cap = r.n * (r.n + 1.0);
            let fraction = if cap > 0.0 { (r.m.norm_sqr() / cap).min(1.0) } else { 0.0 };
            table.push(steady_row(r, fraction, sys.phi)?);
            emit(table, "steady.csv")?;
        }
    }
    let value = summary("steady", &hash, &files, json!({ "rows": rows, "max_discrepancy": worst }));
    write_json(out, "steady_summary.json", &value)?;
    Ok(value)
}

fn label(label: &Option<String>, default: &str) -> String {
    label.clone().unwrap_or_else(|| default.to_string())
}

/// Lifts a two-qubit gate to the model's space (identity on the cavity).
fn lift_gate(sys: &System, u: ComplexMatrix) -> ComplexMatrix {
    match sys.model {
        ModelConfig::Reduced => u,
        ModelConfig::Extended { n_max, .. } => u.kron(&ComplexMatrix::identity(n_max + 1)),
    }
}

/// The configured protocol; an empty list means evolving for the settling time.
pub fn build_protocol(cfg: &RunConfig, sys: &System) -> Result<Vec<ProtocolSegment>, CliError> {
    let tpt = sys.tau_per_time();
    let default = [SegmentConfig::Evolve { duration_tau: sys.settling_tau(), label: None }];
    let steps = if cfg.protocol.is_empty() { &default[..] } else { &cfg.protocol[..] };
    let mut segs = vec![ProtocolSegment::set_state("initial", sys.initial_state(&cfg.initial)?)];
    let mut drive: Option<GeneratorSpec> = None;
    for step in steps {
        let timed = |tau: f64| -> Result<f64, CliError> {
            if !(tau >= 0.0) || !tau.is_finite() {
                return Err(CliError::Config(format!("duration_tau must be finite and >= 0, got {tau}")));
            }
            Ok(tau / tpt)
        };
        let duration = match step {
            SegmentConfig::Evolve { duration_tau, .. }
            | SegmentConfig::Freeze { duration_tau, .. }
            | SegmentConfig::PhaseDecay { duration_tau, .. } => Some(timed(*duration_tau)?),
            _ => None,
        };
        // zero-length evolution is the identity; skipping it keeps one row per state
        if duration == Some(0.0) {
            continue;
        }
        match step {
            SegmentConfig::Evolve { duration_tau, label: l } => {
                if drive.is_none() {
                    drive = Some(sys.drive()?);
                }
                let g = drive.clone().expect("just built");
                segs.push(ProtocolSegment::evolve(&label(l, "evolve"), g, timed(*duration_tau)?, tpt));
            }
            SegmentConfig::Freeze { duration_tau, label: l } => {
                segs.push(ProtocolSegment::evolve(&label(l, "freeze"), GeneratorSpec::zero(sys.space()), timed(*duration_tau)?, tpt));
            }
            SegmentConfig::PhaseDecay { duration_tau, eta_sq, n_bar, label: l } => {
                segs.push(ProtocolSegment::evolve(&label(l, "phase_decay"), sys.phase_decay(*eta_sq, *n_bar)?, timed(*duration_tau)?, tpt));
            }
            SegmentConfig::Unitary { gate, label: l } => {
                segs.push(ProtocolSegment::unitary(&label(l, gate), lift_gate(sys, named_unitary(gate)?)));
            }
            SegmentConfig::SetState { state, label: l } => {
                segs.push(ProtocolSegment::set_state(&label(l, "set_state"), sys.initial_state(state)?));
            }
        }
    }
    Ok(segs)
}

pub fn run_trajectory(cfg: &RunConfig, sys: &System) -> Result<Vec<TrajectoryPoint>, CliError> {
    let segs = build_protocol(cfg, sys)?;
    Ok(run_protocol(&segs, &cfg.sampling.policy())?)
}

pub fn cmd_evolve(cfg: &RunConfig, out: &Path) -> Result<Value, CliError> {
    let sys = cfg.resolve()?;
    let hash = cfg.hash();
    let points = run_trajectory(cfg, &sys)?;
    let segments: Vec<String> = build_protocol(cfg, &sys)?.iter().map(|s| s.label.clone()).collect();
    let table = system_meta(trajectory_table(&points), &sys, &hash)
        .meta("command", "evolve")
        .meta("role", "trajectory")
        .meta("segments", segments.join(" "));
    let files = vec![table.write(out, "evolve.csv")?];
    let last = points.last().expect("protocol starts with a state");
    let value = summary(
        "evolve",
        &hash,
        &files,
        json!({ "rows": points.len(), "final": { "t": last.t, "tau": last.tau, "S_L": last.s_l, "C_free": last.c_free, "F_phi_plus": last.f_phi_plus } }),
    );
    write_json(out, "evolve_summary.json", &value)?;
    Ok(value)
}

pub fn cmd_check(cfg: &RunConfig, out: &Path) -> Result<Value, CliError> {
    let sys = cfg.resolve()?;
    let p = sys.physical.as_ref().ok_or_else(|| CliError::Config("check needs physical parameters".into()))?;
    let report = regime_report(p)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "check",
        "config_sha256": cfg.hash(),
        "omega_t_solved": sys.omega_t_solved,
        "verdict": report.verdict(),
        "margins": report.margins(),
        "report": report,
    });
    write_json(out, "check.json", &value)?;
    Ok(value)
}

/// Trajectory of one (N, f, θ) triple sampled at the requested τ values (in input order).
fn scan_cell(n: f64, f: f64, theta: f64, phi: f64, taus: &[f64]) -> Result<Vec<(f64, f64)>, CliError> {
    let r = ReservoirParams::from_squeezing(n, f, phi)?;
    let g = reduced_generator(&r)?;
    let mut order: Vec<usize> = (0..taus.len()).collect();
    order.sort_by(|&a, &b| taus[a].total_cmp(&taus[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| taus[i]).collect();
    let opts = EvolveOptions { method: Method::Exact, ..Default::default() };
    let states = evolve_states(&rotated_initial_state(theta)?, &g, &sorted, &opts)?;
    let mut out = vec![(0.0, 0.0); taus.len()];
    for (rho, &i) in states.iter().zip(&order) {
        out[i] = (linear_entropy(rho)?, free_concurrence(rho)?);
    }
    Ok(out)
}

pub fn cmd_scan(cfg: &RunConfig, out: &Path) -> Result<Value, CliError> {
    let grid = cfg.scan.as_ref().ok_or_else(|| CliError::Config("scan needs a \"scan\" grid".into()))?;
    let size = grid.size();
    if size > MAX_SCAN_POINTS {
        return Err(CliError::Config(format!("scan grid has {size} points, limit is {MAX_SCAN_POINTS}")));
    }
    if size == 0 {
        return Err(CliError::Config("scan grid is empty".into()));
    }
    if grid.tau.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(CliError::Config("scan tau values must be finite and >= 0".into()));
    }
    let hash = cfg.hash();
    let cells: Vec<(f64, f64, f64)> = grid
        .n
        .iter()
        .flat_map(|&n| grid.m_fraction.iter().flat_map(move |&f| grid.theta.iter().map(move |&th| (n, f, th))))
        .collect();
    // collect preserves input order whatever the worker count
    let results: Vec<Vec<(f64, f64)>> = cells.par_iter().map(|&(n, f, th)| scan_cell(n, f, th, grid.phi, &grid.tau)).collect::<Result<_, _>>()?;
    let mut table = CsvTable::new(&SCAN_COLUMNS)
        .meta("command", "scan")
        .meta("role", "scan")
        .meta("config_sha256", hash.clone())
        .meta("phi", crate::output::fmt_num(grid.phi))
        .meta("time_unit", "tau");
    let n_th = grid.theta.len();
    for (i_n, &n) in grid.n.iter().enumerate() {
        for (i_f, &f) in grid.m_fraction.iter().enumerate() {
            for (i_t, &tau) in grid.tau.iter().enumerate() {
                for (i_th, &th) in grid.theta.iter().enumerate() {
                    let (s, c) = results[(i_n * grid.m_fraction.len() + i_f) * n_th + i_th][i_t];
                    table.push(vec![n, f, tau, th, s, c]);
                }
            }
        }
    }
    let files = vec![table.write(out, "scan.csv")?];
    let value = summary("scan", &hash, &files, json!({ "rows": size }));
    write_json(out, "scan_summary.json", &value)?;
    Ok(value)
}
