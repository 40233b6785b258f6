mod common;

use common::{max_abs_diff, taylor_expm, tensor, trace_out_env};
use eac_core::linalg::{
    hermitian_propagator, identity, intersect, kron, nullspace, partial_trace_env, simultaneous_eigenspaces, trace,
    Subspace,
};
use eac_core::random::{gaussian_hermitian, gaussian_matrix, haar_unitary, seeded};
use eac_core::ComplexMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn diag_from(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = gaussian_matrix(&mut rng, 2, 3);
        let b = gaussian_matrix(&mut rng, 3, 2);
        let c = gaussian_matrix(&mut rng, 2, 2);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        // Each entry is the same triple product, but the association order of
        // the floating-point multiplications differs.
        prop_assert!(max_abs_diff(&left, &right) <= 1e-14 * left.norm().max(1.0));
    }

    #[test]
    fn kron_matches_index_formula(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = gaussian_matrix(&mut rng, 2, 3);
        let b = gaussian_matrix(&mut rng, 3, 2);
        prop_assert_eq!(kron(&a, &b), tensor(&a, &b));
    }

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), dim in 2usize..=3) {
        let mut rng = seeded(seed);
        let a = gaussian_matrix(&mut rng, dim, dim);
        let b = gaussian_matrix(&mut rng, dim, dim);
        let c = gaussian_matrix(&mut rng, dim, dim);
        let d = gaussian_matrix(&mut rng, dim, dim);
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn propagator_group_law(seed in any::<u64>(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let h = gaussian_hermitian(&mut seeded(seed), 5);
        let us = hermitian_propagator(&h, s).unwrap();
        let ut = hermitian_propagator(&h, t).unwrap();
        let ust = hermitian_propagator(&h, s + t).unwrap();
        prop_assert!(max_abs_diff(&(us * ut), &ust) <= 1e-9);
    }

    #[test]
    fn propagator_matches_taylor_oracle(seed in any::<u64>()) {
        let h = gaussian_hermitian(&mut seeded(seed), 6);
        let u = hermitian_propagator(&h, 0.7).unwrap();
        prop_assert!(max_abs_diff(&(u.adjoint() * &u), &identity(6)) <= 1e-9);
        prop_assert!(max_abs_diff(&u, &taylor_expm(&h, 0.7)) <= 1e-9);
    }

    #[test]
    fn partial_trace_preserves_trace_and_linearity(seed in any::<u64>(), d_s in 1usize..4, d_e in 1usize..4) {
        let mut rng = seeded(seed);
        let n = d_s * d_e;
        let m = gaussian_matrix(&mut rng, n, n);
        let k = gaussian_matrix(&mut rng, n, n);
        let z = Complex64::new(0.3, -1.7);
        let pm = partial_trace_env(&m, d_s, d_e).unwrap();
        prop_assert!((trace(&pm) - trace(&m)).norm() <= 1e-12);
        prop_assert!(max_abs_diff(&pm, &trace_out_env(&m, d_s, d_e)) <= 1e-13);
        let combined = partial_trace_env(&(&m + &k * z), d_s, d_e).unwrap();
        let separate = pm + partial_trace_env(&k, d_s, d_e).unwrap() * z;
        prop_assert!(max_abs_diff(&combined, &separate) <= 1e-12);
    }

    #[test]
    fn partial_trace_preserves_positivity(seed in any::<u64>()) {
        let g = gaussian_matrix(&mut seeded(seed), 6, 3);
        let rho = &g * g.adjoint();
        let reduced = partial_trace_env(&rho, 3, 2).unwrap();
        prop_assert!(eac_core::linalg::hermiticity_residual(&reduced) <= 1e-10);
        let min_eig = reduced.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(min_eig >= -1e-10);
    }

    #[test]
    fn nullspace_vectors_are_annihilated(seed in any::<u64>(), rank in 1usize..5) {
        let mut rng = seeded(seed);
        let m = gaussian_matrix(&mut rng, 7, rank) * gaussian_matrix(&mut rng, rank, 6);
        let tol = 1e-9;
        let ns = nullspace(&m, tol);
        prop_assert_eq!(ns.dim(), 6 - rank);
        let scale = m.clone().singular_values().iter().cloned().fold(0.0, f64::max);
        for j in 0..ns.dim() {
            prop_assert!((&m * ns.basis().column(j)).norm() <= 2.0 * tol * scale);
        }
    }

    #[test]
    fn joint_eigenspaces_reconstruct_family(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let u = haar_unitary(&mut rng, 6);
        let a = &u * diag_from(&[1.0, 1.0, 1.0, -2.0, -2.0, 0.5]) * u.adjoint();
        let b = &u * diag_from(&[3.0, 3.0, -1.0, 4.0, 4.0, 4.0]) * u.adjoint();
        let tol = 1e-9;
        let spaces = simultaneous_eigenspaces(&[a.clone(), b.clone()], tol).unwrap();
        let dims: Vec<usize> = spaces.iter().map(|s| s.space.dim()).collect();
        prop_assert_eq!(dims.iter().sum::<usize>(), 6);
        prop_assert_eq!(spaces.len(), 4);
        for (op_index, op) in [a, b].iter().enumerate() {
            let mut rebuilt = ComplexMatrix::zeros(6, 6);
            for s in &spaces {
                rebuilt += s.space.projector() * Complex64::new(s.eigenvalues[op_index], 0.0);
            }
            prop_assert!(max_abs_diff(&rebuilt, op) <= 10.0 * tol);
        }
        for i in 0..spaces.len() {
            for j in i + 1..spaces.len() {
                let overlap = spaces[i].space.basis().adjoint() * spaces[j].space.basis();
                prop_assert!(overlap.norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn random_subspaces_intersect_generically(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = gaussian_matrix(&mut rng, 4, 3);
        let b = gaussian_matrix(&mut rng, 4, 3);
        let sa = Subspace::span(4, &[a.columns(0, 1).into_owned(), a.columns(1, 1).into_owned(), a.columns(2, 1).into_owned()]).unwrap();
        let sb = Subspace::span(4, &[b.columns(0, 1).into_owned(), b.columns(1, 1).into_owned(), b.columns(2, 1).into_owned()]).unwrap();
        // dim(A n B) = dim A + dim B - rank [A B].
        let mut joined = ComplexMatrix::zeros(4, 6);
        joined.columns_mut(0, 3).copy_from(&a);
        joined.columns_mut(3, 3).copy_from(&b);
        let expected = 3 + 3 - joined.rank(1e-9);
        let c = intersect(4, &[sa.clone(), sb.clone()]).unwrap();
        prop_assert_eq!(c.dim(), expected);
        prop_assert_eq!(c.dim(), 2);
        for s in [&sa, &sb] {
            prop_assert!((s.complement_projector() * c.basis()).norm() <= 1e-9);
        }
    }
}
