//! JSON report documents.
//!
//! Every report is `{"schema": "eac-report/1", "payload": {...}}`. Reals are
//! written with 17 significant digits so a basis read back reproduces the
//! written one bit for bit; non-finite values become `null`.

use eac_core::codes::{CodeReport, OperatorAlgebra};
use eac_core::ComplexMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::CliError;

pub const SCHEMA: &str = "eac-report/1";

/// A real written in `{:.16e}` form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(format_real(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

#[derive(Debug, Serialize)]
pub struct Report<P> {
    pub schema: &'static str,
    pub payload: P,
}

impl<P: Serialize> Report<P> {
    pub fn new(payload: P) -> Self {
        Self { schema: SCHEMA, payload }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub tol: Real,
    pub env_dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub times: Vec<Real>,
    pub ambient_cap: usize,
}

#[derive(Debug, Serialize)]
pub struct ModelSummary {
    pub dim: usize,
    pub generators: Vec<String>,
    pub hamiltonian: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct AlgebraSummary {
    pub dim: usize,
    pub abelian: bool,
    pub semisimple: bool,
    pub closure_residual: Real,
}

impl AlgebraSummary {
    pub fn new(algebra: &OperatorAlgebra, semisimple: bool) -> Self {
        Self {
            dim: algebra.dim(),
            abelian: algebra.abelian,
            semisimple,
            closure_residual: Real(algebra.closure_residual()),
        }
    }
}

/// One code with its checks; `basis` is a list of columns of `[re, im]` pairs.
#[derive(Debug, Serialize)]
pub struct CodeEntry {
    pub route: &'static str,
    pub verdict: &'static str,
    pub ambient_dim: usize,
    pub dimension: usize,
    pub basis: Vec<Vec<[Real; 2]>>,
    pub sigmas: Vec<Real>,
    pub lemma31_residual: Real,
    pub hs_invariance_residual: Real,
    pub induced_env_op_shape: Option<[usize; 2]>,
    pub dynamical_min_fidelity: Option<Real>,
}

impl CodeEntry {
    pub fn new(report: &CodeReport) -> Self {
        let v = report.code.basis();
        let basis = (0..v.ncols())
            .map(|j| v.column(j).iter().map(|z| [Real(z.re), Real(z.im)]).collect())
            .collect();
        Self {
            route: report.route.as_str(),
            verdict: report.verdict.as_str(),
            ambient_dim: report.code.ambient_dim(),
            dimension: report.code.dim(),
            basis,
            sigmas: reals(&report.sigmas),
            lemma31_residual: Real(report.lemma31_residual),
            hs_invariance_residual: Real(report.hs_invariance_residual),
            induced_env_op_shape: report.induced_env_op_shape.map(|(r, c)| [r, c]),
            dynamical_min_fidelity: report.dynamical_min_fidelity.map(Real),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FindPayload {
    pub command: &'static str,
    pub route: &'static str,
    pub model: ModelSummary,
    pub config: ConfigEcho,
    pub algebra: Option<AlgebraSummary>,
    /// False when the search could miss codes (non-abelian, non-semisimple algebra).
    pub complete: bool,
    pub codes: Vec<CodeEntry>,
}

#[derive(Debug, Serialize)]
pub struct VerifyPayload {
    pub command: &'static str,
    pub model: ModelSummary,
    pub config: ConfigEcho,
    /// `||V^dagger V - I||_F` of the basis as read, before re-orthonormalization.
    pub basis_drift: Real,
    pub code: CodeEntry,
}

/// Just the basis of a code, as read back from a report or a bare code document.
#[derive(Debug, Deserialize)]
pub struct CodeBasis {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<[f64; 2]>>,
}

impl CodeBasis {
    /// Reads either a find report (selecting `codes[index]`), a verify report,
    /// or a bare object carrying `ambient_dim` and `basis`.
    pub fn from_json(text: &str, index: usize) -> Result<Self, CliError> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("code file is not JSON: {e}")))?;
        let body = doc.get("payload").unwrap_or(&doc);
        let entry = if let Some(codes) = body.get("codes") {
            let codes = codes
                .as_array()
                .ok_or_else(|| CliError::Parse("'codes' is not an array".into()))?;
            codes.get(index).ok_or_else(|| {
                CliError::Validation(format!("code index {index} out of range ({} codes in file)", codes.len()))
            })?
        } else if let Some(code) = body.get("code") {
            code
        } else {
            body
        };
        Self::deserialize(entry).map_err(|e| CliError::Parse(format!("bad code entry: {e}")))
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.ambient_dim == 0 || self.basis.is_empty() {
            return Err(CliError::Validation("code basis is empty".into()));
        }
        let mut m = ComplexMatrix::zeros(self.ambient_dim, self.basis.len());
        for (j, column) in self.basis.iter().enumerate() {
            if column.len() != self.ambient_dim {
                return Err(CliError::Validation(format!(
                    "code basis column {j} has length {} but ambient_dim is {}",
                    column.len(),
                    self.ambient_dim
                )));
            }
            for (i, [re, im]) in column.iter().enumerate() {
                m[(i, j)] = Complex64::new(*re, *im);
            }
        }
        Ok(m)
    }

    pub fn from_matrix(v: &ComplexMatrix) -> Self {
        Self {
            ambient_dim: v.nrows(),
            basis: (0..v.ncols())
                .map(|j| v.column(j).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    /// Bare code document with full-precision numbers.
    pub fn to_json(&self) -> String {
        let basis: Vec<Vec<[Real; 2]>> = self
            .basis
            .iter()
            .map(|col| col.iter().map(|&[re, im]| [Real(re), Real(im)]).collect())
            .collect();
        let doc = serde_json::json!({
            "ambient_dim": self.ambient_dim,
            "basis": serde_json::to_value(basis).expect("basis serialization"),
        });
        serde_json::to_string_pretty(&doc).expect("code serialization") + "\n"
    }
}
