//! CSV dialect shared with the plotting side: `#` metadata lines, one
//! column-name row, then comma-separated numbers with 17 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use resq_core::dynamics::TrajectoryPoint;
use resq_core::measures::PlaneCurve;

use crate::config::System;
use crate::error::CliError;

pub const TRAJECTORY_COLUMNS: [&str; 9] = ["t", "tau", "S_L", "C_free", "F_phi_plus", "F_phi_minus", "F_psi_plus", "F_psi_minus", "segment"];
pub const CURVE_COLUMNS: [&str; 3] = ["param", "S_L", "C_free"];

#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { meta: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| fmt_num(x))).expect("in-memory write");
        }
        out.push_str(std::str::from_utf8(&w.into_inner().expect("in-memory flush")).expect("ascii output"));
        out
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        let path = dir.join(name);
        std::fs::write(&path, self.render()).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = |e: csv::Error| CliError::Config(format!("bad CSV: {e}"));
        let mut table = CsvTable::default();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let (k, v) = line[1..].trim().split_once(':').ok_or_else(|| CliError::Config(format!("bad metadata line {line:?}")))?;
            table.meta.push((k.trim().into(), v.trim().into()));
        }
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        table.columns = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        for record in r.records() {
            let row = record
                .map_err(bad)?
                .iter()
                .map(|c| c.parse::<f64>().map_err(|e| CliError::Config(format!("bad number {c:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Metadata lines describing the resolved system.
pub fn system_meta(table: CsvTable, sys: &System, config_hash: &str) -> CsvTable {
    let r = &sys.reservoir;
    let mut t = table
        .meta("config_sha256", config_hash)
        .meta("N", fmt_num(r.n))
        .meta("M", format!("{} {}", fmt_num(r.m.re), fmt_num(r.m.im)))
        .meta(
            "rates",
            format!(
                "amplitude={} phase_damping={} slowest={}",
                fmt_num(r.amplitude_rate()),
                fmt_num(r.phase_damping_rate()),
                fmt_num(r.slowest_rate())
            ),
        )
        .meta("time_unit", if sys.is_dimensionless() { "tau" } else { "s" })
        .meta("model", format!("{:?}", sys.model));
    if let Some(w) = sys.omega_t_solved {
        t = t.meta("omega_t_solved_rad_per_s", fmt_num(w));
    }
    t
}

pub fn trajectory_table(points: &[TrajectoryPoint]) -> CsvTable {
    let mut t = CsvTable::new(&TRAJECTORY_COLUMNS);
    for p in points {
        t.push(vec![p.t, p.tau, p.s_l, p.c_free, p.f_phi_plus, p.f_phi_minus, p.f_psi_plus, p.f_psi_minus, p.segment as f64]);
    }
    t
}

pub fn curve_table(curve: &PlaneCurve) -> CsvTable {
    let mut t = CsvTable::new(&CURVE_COLUMNS).meta("role", "reference").meta("curve", curve.kind.label());
    for p in &curve.points {
        t.push(vec![p.param, p.s_l, p.c_free]);
    }
    t
}
