//! Reference computations that share no code path with the library kernels.
#![allow(dead_code)]

use eac_core::ComplexMatrix;
use num_complex::Complex64;

/// `exp(-i t h)` by scaling, a 30-term Taylor series, and repeated squaring.
pub fn taylor_expm(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = h.nrows();
    let a = h * Complex64::new(0.0, -t);
    let norm = a.norm();
    let mut halvings = 0u32;
    while norm / 2f64.powi(halvings as i32) > 0.5 {
        halvings += 1;
    }
    let a = a.unscale(2f64.powi(halvings as i32));
    let mut term = ComplexMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..halvings {
        sum = &sum * &sum;
    }
    sum
}

/// Tensor product by explicit index arithmetic.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i1 in 0..ar {
        for j1 in 0..ac {
            for i2 in 0..br {
                for j2 in 0..bc {
                    out[(i1 * br + i2, j1 * bc + j2)] = a[(i1, j1)] * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Environment trace by explicit index sum.
pub fn trace_out_env(m: &ComplexMatrix, d_s: usize, d_e: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d_s, d_s);
    for i in 0..d_s {
        for j in 0..d_s {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d_e {
                acc += m[(i * d_e + k, j * d_e + k)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Marginal state from the joint Hamiltonian, built and exponentiated
/// independently of the library.
pub fn reference_marginal(
    h_s: &ComplexMatrix,
    h_e: &ComplexMatrix,
    couplings: &[(ComplexMatrix, ComplexMatrix)],
    rho_s: &ComplexMatrix,
    rho_e: &ComplexMatrix,
    t: f64,
) -> ComplexMatrix {
    let (d_s, d_e) = (h_s.nrows(), h_e.nrows());
    let id_s = ComplexMatrix::identity(d_s, d_s);
    let id_e = ComplexMatrix::identity(d_e, d_e);
    let mut h = tensor(h_s, &id_e) + tensor(&id_s, h_e);
    for (s, e) in couplings {
        h += tensor(s, e);
    }
    let u = taylor_expm(&h, t);
    let joint = &u * tensor(rho_s, rho_e) * u.adjoint();
    trace_out_env(&joint, d_s, d_e)
}

/// Integer coproduct `sum_i X^(i)` on `n` cells by enumerating basis strings.
pub fn integer_coproduct(x: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let d = x.len();
    let dim = d.pow(n as u32);
    let digits = |mut idx: usize| {
        let mut out = vec![0; n];
        for k in (0..n).rev() {
            out[k] = idx % d;
            idx /= d;
        }
        out
    };
    let mut out = vec![vec![0i64; dim]; dim];
    for a in 0..dim {
        let da = digits(a);
        for b in 0..dim {
            let db = digits(b);
            let mut acc = 0;
            for i in 0..n {
                if (0..n).all(|k| k == i || da[k] == db[k]) {
                    acc += x[da[i]][db[i]];
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

/// Integer spanning set of sl(d): `E_jk` for `j != k` and `E_jj - E_(j+1)(j+1)`.
pub fn integer_sl_basis(d: usize) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for j in 0..d {
        for k in 0..d {
            if j != k {
                let mut m = vec![vec![0; d]; d];
                m[j][k] = 1;
                out.push(m);
            }
        }
    }
    for j in 0..d - 1 {
        let mut m = vec![vec![0; d]; d];
        m[j][j] = 1;
        m[j + 1][j + 1] = -1;
        out.push(m);
    }
    out
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Exact rank over GF(2^61 - 1) by Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v.rem_euclid(PRIME as i64) as u64).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = powmod(m[rank][c], PRIME - 2);
        let pivot: Vec<u64> = m[rank].iter().map(|&v| mulmod(v, inv)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot) {
                    *x = (*x + PRIME - mulmod(f, pv)) % PRIME;
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Dimension of the joint kernel of the sl(d) coproducts on `n` cells.
pub fn brute_force_singlet_dim(d: usize, n: usize) -> usize {
    let mut stacked = Vec::new();
    for x in integer_sl_basis(d) {
        stacked.extend(integer_coproduct(&x, n));
    }
    d.pow(n as u32) - rank_mod_p(&stacked)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Multiplicity of the spin-0 irrep in `n` qubits.
pub fn qubit_singlet_multiplicity(n: u64) -> u64 {
    if n % 2 == 1 {
        0
    } else {
        binomial(n, n / 2) - binomial(n, n / 2 + 1)
    }
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
