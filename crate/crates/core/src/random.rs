//! Seeded random operators and states.
//!
//! Every generator is a `ChaCha8Rng`. Independent draws (trials, samples)
//! take their own stream of the same seed, so results do not depend on the
//! order in which they are evaluated.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_part, spectral_norm, ComplexMatrix};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian: real and imaginary parts independent N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    // from_fn visits column-major; fill explicitly so draws are row-major.
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// Gaussian Hermitian matrix scaled to unit spectral norm.
pub fn unit_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = hermitian_part(&gaussian_matrix(rng, dim, dim));
    let norm = spectral_norm(&h);
    if norm > 0.0 {
        h.unscale(norm)
    } else {
        h
    }
}

/// Gaussian Hermitian matrix without normalization.
pub fn gaussian_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    hermitian_part(&gaussian_matrix(rng, dim, dim))
}

/// Uniformly distributed unit column vector.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let v = gaussian_matrix(rng, dim, 1);
    let norm = v.norm();
    v.unscale(norm)
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let qr = gaussian_matrix(rng, dim, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for z in q.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
    }
    q
}
