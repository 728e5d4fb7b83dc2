#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Output;

use resq::output::CsvTable;

pub fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

pub fn resq(args: &[&str], out: &Path) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_resq"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

pub fn ok(args: &[&str], out: &Path) -> serde_json::Value {
    let o = resq(args, out);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("summary is json")
}

pub fn table(path: &Path) -> CsvTable {
    CsvTable::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}
