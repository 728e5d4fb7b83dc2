//! Built-in figure datasets: one CSV per curve plus the reference curves.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use resq_core::dynamics::{local_unitary_u, rotated_initial_state, run_protocol, DensityMatrix, ProtocolSegment, SamplingPolicy};
use resq_core::generators::{reduced_generator, reduced_generator_from_rates, ReducedRates};
use resq_core::measures::{free_concurrence, linear_entropy, mems_curve, random_density_matrix_from, thermal_curve, werner_curve};
use resq_core::params::{effective_from_physical, raman_setup, reservoir_from_effective, ReservoirParams};
use serde_json::{json, Value};

use crate::commands::{steady_sweep_table, summary, write_json};
use crate::config::{ModelConfig, System};
use crate::error::CliError;
use crate::output::{curve_table, fmt_num, system_meta, trajectory_table, CsvTable};

pub const FIGURES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];
pub const CURVE_SAMPLES: usize = 200;
pub const FIG2_N: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];
pub const RANDOM_CLOUD: usize = 2000;

/// (initial ket, N) pairs under ideal squeezing.
pub const FIG3_CURVES: [(&str, f64); 7] = [("00", 0.2), ("00", 0.5), ("00", 1.0), ("00", 5.0), ("11", 0.2), ("01", 2.0), ("01", 0.01)];

pub const FIG4_N: f64 = 3.1;
pub const FIG4_THETAS: [f64; 2] = [PI / 4.0, PI / 2.0];
/// Points on the θ = π/2 curve where U and phase decay take over.
pub const FIG4_BRANCH_TAU: [f64; 4] = [0.05, 0.15, 0.4, 1.0];
pub const FIG4_DECAY_TAU: f64 = 5.0;
pub const FIG4_ETA_SQ: f64 = 1.0;
pub const FIG4_DECAY_NBAR: f64 = 1.0;

/// (Ω_r/2π in MHz, initial ket or "theta" for θ = π/2).
pub const FIG5_CURVES: [(f64, &str); 5] = [(120.0, "theta"), (173.0, "00"), (245.0, "11"), (110.0, "01"), (458.0, "01")];
pub const FIG5_N_MAX: usize = 4;
pub const FIG5_DURATION_TAU: f64 = 30.0;

pub struct FigureOptions {
    pub seed: Option<u64>,
    /// Overrides the fig2 N set.
    pub fig2_n: Option<Vec<f64>>,
}

fn policy() -> SamplingPolicy {
    SamplingPolicy { count: CURVE_SAMPLES, ..Default::default() }
}

fn dimensionless(reservoir: ReservoirParams) -> System {
    System { reservoir, effective: None, physical: None, omega_t_solved: None, phi: PI, model: ModelConfig::Reduced }
}

fn tagged(table: CsvTable, figure: &str, role: &str, curve: &str) -> CsvTable {
    table.meta("command", format!("figure {figure}")).meta("role", role).meta("curve", curve)
}

pub fn reference_tables() -> Result<Vec<(String, CsvTable)>, CliError> {
    let curves = [werner_curve(CURVE_SAMPLES)?, mems_curve(CURVE_SAMPLES)?, thermal_curve(CURVE_SAMPLES)?];
    Ok(curves.iter().map(|c| (format!("ref_{}.csv", c.kind.label().to_lowercase()), curve_table(c))).collect())
}

/// Ginibre-sampled two-qubit states, reproducible from the seed.
pub fn random_cloud(seed: u64, count: usize) -> Result<CsvTable, CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut table = CsvTable::new(&["index", "S_L", "C_free"]).meta("role", "reference").meta("curve", "random").meta("seed", seed.to_string());
    for k in 0..count {
        let rho = random_density_matrix_from(4, &mut rng)?;
        table.push(vec![k as f64, linear_entropy(&rho)?, free_concurrence(&rho)?]);
    }
    Ok(table)
}

fn fig2(n_set: &[f64]) -> Result<Vec<(String, CsvTable)>, CliError> {
    n_set
        .iter()
        .map(|&n| {
            let table = steady_sweep_table(n, CURVE_SAMPLES, PI)?;
            Ok((format!("fig2_N{n}.csv"), tagged(table, "fig2", "steady-sweep", &format!("N={n}"))))
        })
        .collect()
}

fn fig3() -> Result<Vec<(String, CsvTable)>, CliError> {
    FIG3_CURVES
        .par_iter()
        .map(|&(ket, n)| {
            let sys = dimensionless(ReservoirParams::ideal(n, PI)?);
            let segs = [
                ProtocolSegment::set_state("initial", DensityMatrix::basis(ket)?),
                ProtocolSegment::evolve("evolve", reduced_generator(&sys.reservoir)?, sys.settling_tau(), 1.0),
            ];
            let table = system_meta(trajectory_table(&run_protocol(&segs, &policy())?), &sys, "builtin");
            Ok((format!("fig3_{ket}_N{n}.csv"), tagged(table, "fig3", "trajectory", &format!("|{ket}>, N={n}"))))
        })
        .collect()
}

fn fig4() -> Result<Vec<(String, CsvTable)>, CliError> {
    let sys = dimensionless(ReservoirParams::ideal(FIG4_N, PI)?);
    let drive = reduced_generator(&sys.reservoir)?;
    let decay = reduced_generator_from_rates(&ReducedRates::phase_damping_only(FIG4_ETA_SQ / 2.0 * FIG4_DECAY_NBAR * (FIG4_DECAY_NBAR + 1.0)))?;
    let mut out = Vec::new();
    for (i, &theta) in FIG4_THETAS.iter().enumerate() {
        let segs = [
            ProtocolSegment::set_state("initial", rotated_initial_state(theta)?),
            ProtocolSegment::evolve("evolve", drive.clone(), sys.settling_tau(), 1.0),
        ];
        let table = system_meta(trajectory_table(&run_protocol(&segs, &policy())?), &sys, "builtin").meta("theta", fmt_num(theta));
        let name = ["pi4", "pi2"][i];
        out.push((format!("fig4_theta_{name}.csv"), tagged(table, "fig4", "trajectory", &format!("theta={name}"))));
    }
    for &branch in &FIG4_BRANCH_TAU {
        let segs = [
            ProtocolSegment::set_state("initial", rotated_initial_state(PI / 2.0)?),
            ProtocolSegment::evolve("evolve", drive.clone(), branch, 1.0),
            ProtocolSegment::unitary("U", local_unitary_u()),
            ProtocolSegment::evolve("phase_decay", decay.clone(), FIG4_DECAY_TAU, 1.0),
        ];
        // the dotted curve starts where U is applied
        let points: Vec<_> = run_protocol(&segs, &policy())?.into_iter().filter(|p| p.segment >= 2).collect();
        let table = trajectory_table(&points)
            .meta("branch_tau", fmt_num(branch))
            .meta("eta_sq", fmt_num(FIG4_ETA_SQ))
            .meta("n_bar", fmt_num(FIG4_DECAY_NBAR))
            .meta("time_unit", "tau");
        out.push((format!("fig4_dotted_tau{branch}.csv"), tagged(table, "fig4", "trajectory", &format!("U + phase decay from tau={branch}"))));
    }
    Ok(out)
}

fn fig5() -> Result<Vec<(String, CsvTable)>, CliError> {
    FIG5_CURVES
        .par_iter()
        .map(|&(omega_r, ket)| {
            let p = raman_setup(omega_r).with_resonant_omega_t()?;
            let e = effective_from_physical(&p)?;
            let reservoir = reservoir_from_effective(&e, p.n_bar, p.phi, p.kappa)?;
            let sys = System {
                reservoir,
                effective: Some(e),
                physical: Some(p),
                omega_t_solved: Some(p.omega_t),
                phi: p.phi,
                model: ModelConfig::Extended { n_max: FIG5_N_MAX, spontaneous: true },
            };
            let rho = if ket == "theta" { rotated_initial_state(PI / 2.0)? } else { DensityMatrix::basis(ket)? };
            let tpt = sys.tau_per_time();
            let segs = [
                ProtocolSegment::set_state("initial", rho.with_cavity_vacuum(FIG5_N_MAX)?),
                ProtocolSegment::evolve("evolve", sys.drive()?, FIG5_DURATION_TAU / tpt, tpt),
            ];
            let table = system_meta(trajectory_table(&run_protocol(&segs, &policy())?), &sys, "builtin").meta("omega_r_mhz", fmt_num(omega_r));
            let start = if ket == "theta" { "theta=pi2".to_string() } else { format!("|{ket}>") };
            Ok((format!("fig5_omega_r{omega_r}.csv"), tagged(table, "fig5", "trajectory", &format!("Omega_r={omega_r} MHz, {start}"))))
        })
        .collect()
}

pub fn cmd_figure(name: &str, out: &Path, opts: &FigureOptions) -> Result<Value, CliError> {
    let mut tables = match name {
        "fig2" => fig2(opts.fig2_n.as_deref().unwrap_or(&FIG2_N))?,
        "fig3" => fig3()?,
        "fig4" => fig4()?,
        "fig5" => fig5()?,
        other => return Err(CliError::Config(format!("unknown figure {other:?} (known: {})", FIGURES.join(", ")))),
    };
    tables.extend(reference_tables()?);
    if let Some(seed) = opts.seed {
        tables.push(("ref_random.csv".into(), random_cloud(seed, RANDOM_CLOUD)?));
    }
    let files: Vec<PathBuf> = tables.iter().map(|(file, t)| t.write(out, file)).collect::<Result<_, _>>()?;
    let value = summary(&format!("figure {name}"), "builtin", &files, json!({ "figure": name, "curves": files.len() }));
    write_json(out, &format!("{name}_summary.json"), &value)?;
    Ok(value)
}
