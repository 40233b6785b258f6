//! Registers of `n` identical `d`-level cells coupled symmetrically to a
//! common environment.
//!
//! Shared environment operators make the interaction depend on the system only
//! through coproducts `sum_i S^(i)`, which commute with every permutation of
//! the cells.

use num_complex::Complex64;

use super::algebra::{gell_mann, lie_closure, singlet_sector};
use super::{check_lemma31, CodeReport, CodeRoute, ErrorModel, Verdict};
use crate::error::{EacError, Result};
use crate::linalg::{ensure_square, identity, kron_all, zeros, ComplexMatrix, Subspace};

/// Default cap on the register dimension `d^n`.
pub const DEFAULT_AMBIENT_CAP: usize = 4096;

/// `d^n`, or an error when it overflows or exceeds `cap`.
pub fn register_dim(d: usize, n: usize, cap: usize) -> Result<usize> {
    let dim = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .unwrap_or(usize::MAX);
    if dim > cap {
        return Err(EacError::AmbientCapExceeded { dim, cap });
    }
    Ok(dim)
}

/// `sum_{i=1..n} I^(i-1) (x) s (x) I^(n-i)`.
pub fn coproduct(s: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let d = ensure_square(s, "coproduct")?;
    if n == 0 {
        return Err(EacError::InvalidArgument("coproduct needs at least one cell".into()));
    }
    let id = identity(d);
    let mut total = zeros(d.pow(n as u32), d.pow(n as u32));
    for i in 0..n {
        let factors: Vec<&ComplexMatrix> = (0..n).map(|k| if k == i { s } else { &id }).collect();
        total += kron_all(factors);
    }
    Ok(total)
}

/// Index map of the transposition of cells `k` and `k + 1` (0-based) on the
/// computational basis of `n` cells of dimension `d`. Cell 0 is the most
/// significant digit.
pub fn transposition_permutation(n: usize, d: usize, k: usize) -> Vec<usize> {
    assert!(k + 1 < n, "transposition ({k}, {}) outside {n} cells", k + 1);
    let dim = d.pow(n as u32);
    let hi = d.pow((n - k - 1) as u32);
    let lo = d.pow((n - k - 2) as u32);
    (0..dim)
        .map(|idx| {
            let a = (idx / hi) % d;
            let b = (idx / lo) % d;
            idx - a * hi - b * lo + b * hi + a * lo
        })
        .collect()
}

/// Permutation matrix `P` with `P e_i = e_{perm[i]}`.
pub fn permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let mut p = zeros(perm.len(), perm.len());
    for (i, &j) in perm.iter().enumerate() {
        p[(j, i)] = Complex64::new(1.0, 0.0);
    }
    p
}

/// Invariance of `x` under conjugation by the adjacent transpositions, which
/// generate the symmetric group.
///
/// Returns the verdict and `max_k ||P_k x P_k^dagger - x||_F / max(1, ||x||_F)`.
pub fn check_sn_invariance(x: &ComplexMatrix, n: usize, d: usize, tol: f64) -> Result<(bool, f64)> {
    let dim = register_dim(d, n, usize::MAX)?;
    if x.nrows() != dim || x.ncols() != dim {
        return Err(EacError::DimensionMismatch {
            context: "check_sn_invariance",
            expected: dim,
            found: if x.nrows() != dim { x.nrows() } else { x.ncols() },
        });
    }
    let scale = x.norm().max(1.0);
    let mut worst: f64 = 0.0;
    for k in 0..n.saturating_sub(1) {
        let perm = transposition_permutation(n, d, k);
        let mut sq = 0.0;
        for j in 0..dim {
            for i in 0..dim {
                sq += (x[(perm[i], perm[j])] - x[(i, j)]).norm_sqr();
            }
        }
        worst = worst.max(sq.sqrt() / scale);
    }
    Ok((worst <= tol, worst))
}

/// Register error model whose generators are the coproducts of the cell generators.
pub fn build_register_model(
    cell_generators: &[ComplexMatrix],
    n: usize,
    h_r: Option<ComplexMatrix>,
) -> Result<ErrorModel> {
    let first = cell_generators
        .first()
        .ok_or_else(|| EacError::InvalidArgument("no cell generators".into()))?;
    let d = ensure_square(first, "cell generator")?;
    let dim = register_dim(d, n, usize::MAX)?;
    let generators = cell_generators
        .iter()
        .map(|s| {
            if s.nrows() != d || s.ncols() != d {
                return Err(EacError::DimensionMismatch {
                    context: "cell generator",
                    expected: d,
                    found: s.nrows(),
                });
            }
            crate::linalg::ensure_hermitian(s, crate::linalg::HERMITIAN_TOL)?;
            coproduct(s, n)
        })
        .collect::<Result<Vec<_>>>()?;
    ErrorModel::new(h_r.unwrap_or_else(|| zeros(dim, dim)), generators)
}

/// Singlet sector of the `n`-fold tensor power of the defining representation
/// of sl(d), checked against the register model with zero self-Hamiltonian.
pub fn register_singlet_code(d: usize, n: usize, tol: f64, ambient_cap: usize) -> Result<CodeReport> {
    if d < 2 || n == 0 {
        return Err(EacError::InvalidArgument(format!(
            "register needs d >= 2 and n >= 1 (got d = {d}, n = {n})"
        )));
    }
    let dim = register_dim(d, n, ambient_cap)?;
    let model = build_register_model(&gell_mann(d), n, None)?;
    let algebra = lie_closure(model.generators(), dim * dim, tol)?;
    let code = singlet_sector(&algebra, tol)?;
    singlet_report(&model, code, CodeRoute::RegisterSinglet, tol)
}

/// Report, with the scalar-action check, for a singlet subspace; the zero subspace is not a code.
pub(crate) fn singlet_report(model: &ErrorModel, code: Subspace, route: CodeRoute, tol: f64) -> Result<CodeReport> {
    if code.is_zero() {
        return Ok(CodeReport {
            code,
            route,
            sigmas: Vec::new(),
            lemma31_residual: 0.0,
            induced_env_op_shape: None,
            hs_invariance_residual: 0.0,
            dynamical_min_fidelity: None,
            verdict: Verdict::NotEac,
        });
    }
    let mut report = check_lemma31(model, &code, tol)?;
    report.route = route;
    Ok(report)
}
