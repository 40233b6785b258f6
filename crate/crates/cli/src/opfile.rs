//! Sparse text format for operators.
//!
//! ```text
//! # comment
//! dim 2
//! operator sz generator
//! 0 0 1 0
//! 1 1 -1 0
//! end
//! ```
//!
//! The `dim` header applies to every operator in the file. Each block lists
//! `row col re im` triplets; unlisted entries are zero and a repeated
//! `(row, col)` is an error. The role after the operator name defaults to
//! `generator`.

use std::fmt::Write as _;
use std::str::FromStr;

use eac_core::ComplexMatrix;
use num_complex::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Error generator `S_l`.
    Generator,
    /// System self-Hamiltonian.
    Hamiltonian,
    /// System density matrix.
    State,
    /// Environment self-Hamiltonian.
    EnvHamiltonian,
    /// Environment operator `E_l` paired with the generator of the same position.
    Coupling,
    /// Environment density matrix.
    EnvState,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Generator => "generator",
            Role::Hamiltonian => "hamiltonian",
            Role::State => "state",
            Role::EnvHamiltonian => "env_hamiltonian",
            Role::Coupling => "coupling",
            Role::EnvState => "env_state",
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "generator" => Role::Generator,
            "hamiltonian" => Role::Hamiltonian,
            "state" => Role::State,
            "env_hamiltonian" => Role::EnvHamiltonian,
            "coupling" => Role::Coupling,
            "env_state" => Role::EnvState,
            other => return Err(format!("unknown operator role '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

/// One named operator block.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFile {
    pub dim: usize,
    pub name: String,
    pub role: Role,
    pub entries: Vec<Entry>,
}

impl OperatorFile {
    /// Sparse triplets of a dense matrix; exact zeros are skipped.
    pub fn from_matrix(name: &str, role: Role, m: &ComplexMatrix) -> Self {
        let mut entries = Vec::new();
        for row in 0..m.nrows() {
            for col in 0..m.ncols() {
                let z = m[(row, col)];
                if z.re != 0.0 || z.im != 0.0 {
                    entries.push(Entry { row, col, re: z.re, im: z.im });
                }
            }
        }
        Self {
            dim: m.nrows(),
            name: name.to_string(),
            role,
            entries,
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            m[(e.row, e.col)] = Complex64::new(e.re, e.im);
        }
        m
    }
}

/// A parsed operator file: shared dimension plus operator blocks in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDocument {
    pub dim: usize,
    pub operators: Vec<OperatorFile>,
}

impl OperatorDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut dim: Option<usize> = None;
        let mut operators: Vec<OperatorFile> = Vec::new();
        let mut open: Option<OperatorFile> = None;

        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |msg: String| CliError::Parse(format!("line {line_no}: {msg}"));

            match fields[0] {
                "dim" => {
                    if dim.is_some() {
                        return Err(parse_err("repeated dim header".into()));
                    }
                    let value = fields
                        .get(1)
                        .and_then(|v| v.parse::<usize>().ok())
                        .filter(|&v| v > 0 && fields.len() == 2)
                        .ok_or_else(|| parse_err("expected 'dim <positive integer>'".into()))?;
                    dim = Some(value);
                }
                "operator" => {
                    let d = dim.ok_or_else(|| parse_err("operator block before dim header".into()))?;
                    if open.is_some() {
                        return Err(parse_err("operator block opened before 'end'".into()));
                    }
                    let name = fields
                        .get(1)
                        .ok_or_else(|| parse_err("operator block needs a name".into()))?;
                    if operators.iter().any(|op| op.name == *name) {
                        return Err(parse_err(format!("duplicate operator name '{name}'")));
                    }
                    let role = match fields.get(2) {
                        Some(r) => r.parse::<Role>().map_err(parse_err)?,
                        None => Role::Generator,
                    };
                    if fields.len() > 3 {
                        return Err(parse_err("trailing fields after operator role".into()));
                    }
                    open = Some(OperatorFile {
                        dim: d,
                        name: name.to_string(),
                        role,
                        entries: Vec::new(),
                    });
                }
                "end" => {
                    let op = open
                        .take()
                        .ok_or_else(|| parse_err("'end' without an open operator block".into()))?;
                    operators.push(op);
                }
                _ => {
                    let op = open
                        .as_mut()
                        .ok_or_else(|| parse_err(format!("unexpected '{}' outside an operator block", fields[0])))?;
                    if fields.len() != 4 {
                        return Err(parse_err("expected 'row col re im'".into()));
                    }
                    let row = fields[0]
                        .parse::<usize>()
                        .map_err(|_| parse_err(format!("bad row index '{}'", fields[0])))?;
                    let col = fields[1]
                        .parse::<usize>()
                        .map_err(|_| parse_err(format!("bad column index '{}'", fields[1])))?;
                    let re = parse_real(fields[2]).ok_or_else(|| parse_err(format!("bad real part '{}'", fields[2])))?;
                    let im = parse_real(fields[3])
                        .ok_or_else(|| parse_err(format!("bad imaginary part '{}'", fields[3])))?;
                    if row >= op.dim || col >= op.dim {
                        return Err(CliError::Validation(format!(
                            "line {line_no}: entry ({row}, {col}) of operator '{}' is outside dimension {}",
                            op.name, op.dim
                        )));
                    }
                    if op.entries.iter().any(|e| e.row == row && e.col == col) {
                        return Err(parse_err(format!("duplicate entry ({row}, {col}) in operator '{}'", op.name)));
                    }
                    op.entries.push(Entry { row, col, re, im });
                }
            }
        }
        if let Some(op) = open {
            return Err(CliError::Parse(format!("operator '{}' is missing 'end'", op.name)));
        }
        let dim = dim.ok_or_else(|| CliError::Parse("missing dim header".into()))?;
        Ok(Self { dim, operators })
    }

    pub fn with_role(&self, role: Role) -> impl Iterator<Item = &OperatorFile> {
        self.operators.iter().filter(move |op| op.role == role)
    }

    /// The single operator with `role`, if present; more than one is an error.
    pub fn single(&self, role: Role) -> Result<Option<&OperatorFile>, CliError> {
        let mut found = self.with_role(role);
        let first = found.next();
        if let Some(second) = found.next() {
            return Err(CliError::Validation(format!(
                "more than one {} operator ('{}' and '{}')",
                role.as_str(),
                first.map(|f| f.name.as_str()).unwrap_or(""),
                second.name
            )));
        }
        Ok(first)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.dim);
        for op in &self.operators {
            let _ = writeln!(out, "operator {} {}", op.name, op.role.as_str());
            for e in &op.entries {
                let _ = writeln!(out, "{} {} {:.16e} {:.16e}", e.row, e.col, e.re, e.im);
            }
            let _ = writeln!(out, "end");
        }
        out
    }
}

fn parse_real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}
