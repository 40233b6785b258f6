#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use eac_cli::opfile::{OperatorDocument, OperatorFile, Role};
use eac_core::codes::build_register_model;
use eac_core::linalg::pauli;
use eac_core::ComplexMatrix;
use num_complex::Complex64;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn eac(args: &[&str]) -> Run {
    eac_with_env(args, None)
}

pub fn eac_with_env(args: &[&str], seed_env: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eac"));
    cmd.args(args).env_remove("EAC_SEED");
    if let Some(seed) = seed_env {
        cmd.env("EAC_SEED", seed);
    }
    let out = cmd.output().expect("spawn eac");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn write_ops(dir: &Path, file: &str, ops: &[(&str, Role, ComplexMatrix)]) -> PathBuf {
    let doc = OperatorDocument {
        dim: ops[0].2.nrows(),
        operators: ops
            .iter()
            .map(|(name, role, m)| OperatorFile::from_matrix(name, *role, m))
            .collect(),
    };
    let path = dir.join(file);
    std::fs::write(&path, doc.render()).unwrap();
    path
}

pub fn ket(amplitudes: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_iterator(amplitudes.len(), 1, amplitudes.iter().map(|&a| Complex64::new(a, 0.0)))
}

pub fn singlet() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ket(&[0.0, h, -h, 0.0])
}

/// Operator file with the N-cell coproducts of the Pauli matrices.
pub fn register_model_file(dir: &Path, n: usize) -> PathBuf {
    let model = build_register_model(&[pauli::x(), pauli::y(), pauli::z()], n, None).unwrap();
    let names = ["jx", "jy", "jz"];
    let ops: Vec<_> = names
        .iter()
        .zip(model.generators())
        .map(|(name, g)| (*name, Role::Generator, g.clone()))
        .collect();
    write_ops(dir, &format!("register{n}.op"), &ops)
}

pub fn code_file(dir: &Path, file: &str, basis: &ComplexMatrix) -> PathBuf {
    let path = dir.join(file);
    std::fs::write(&path, eac_cli::report::CodeBasis::from_matrix(basis).to_json()).unwrap();
    path
}

pub fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("report is JSON")
}

pub fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).expect("column");
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}
