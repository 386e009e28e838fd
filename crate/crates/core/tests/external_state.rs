mod common;

use approx::assert_abs_diff_eq;
use common::{permutation_matrix, random_density, random_spectrum, rng};
use mbcoh_core::coherence::coherence_oracle;
use mbcoh_core::external::build_external;
use mbcoh_core::state::{product_state, DensityMatrix};
use mbcoh_core::symgroup;
use mbcoh_core::{Execution, Statistics};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `tr(Π_S ρ)` with `Π_S` assembled from explicit permutation matrices.
fn internal_symmetric_projection(rho: &DensityMatrix, m: usize, n: usize) -> f64 {
    let perms = symgroup::all(n).unwrap();
    let dim = rho.dim();
    let mut proj = DMatrix::<Complex64>::zeros(dim, dim);
    for p in &perms {
        proj += permutation_matrix(p.images(), m);
    }
    (proj * rho.entries()).trace().re / perms.len() as f64
}

#[test]
fn entries_match_explicit_permutation_matrices() {
    let mut r = rng(11);
    for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let rho = random_density(&mut r, usize::pow(m, n as u32));
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let ext = build_external(&rho, n, stats, Execution::Parallel).unwrap();
            let perms = ext.permutations();
            let k = perms.len() as f64;
            for (i, pi) in perms.iter().enumerate() {
                let a = permutation_matrix(pi.images(), m);
                for (j, pj) in perms.iter().enumerate() {
                    let b = permutation_matrix(pj.images(), m);
                    let want = (&a * rho.entries() * b.adjoint()).trace()
                        * (stats.sign(pi) * stats.sign(pj) / k);
                    let got = ext.coefficients()[(i, j)];
                    assert!((got - want).norm() < 1e-13, "m={m} n={n} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn projector_identity_for_product_states() {
    let mut r = rng(12);
    for m in 1..=3 {
        for n in 2..=3 {
            for _ in 0..4 {
                let rho1 = random_density(&mut r, m);
                let rho = product_state(&rho1, n).unwrap();
                let want = internal_symmetric_projection(&rho, m, n);
                for stats in [Statistics::Boson, Statistics::Fermion] {
                    let ext = build_external(&rho, n, stats, Execution::Sequential).unwrap();
                    assert_abs_diff_eq!(ext.symmetric_projection(), want, epsilon = 1e-10);
                }
            }
        }
    }
}

#[test]
fn external_state_is_a_density_matrix() {
    let mut r = rng(13);
    for (m, n) in [(2, 2), (2, 3), (3, 3), (2, 4)] {
        for _ in 0..5 {
            let rho = random_density(&mut r, usize::pow(m, n as u32));
            for stats in [Statistics::Boson, Statistics::Fermion] {
                let ext = build_external(&rho, n, stats, Execution::Parallel).unwrap();
                ext.validate().unwrap();
            }
        }
    }
}

#[test]
fn statistics_only_change_phases() {
    let mut r = rng(14);
    for (m, n) in [(2, 3), (3, 3), (2, 4)] {
        let rho = random_density(&mut r, usize::pow(m, n as u32));
        let b = build_external(&rho, n, Statistics::Boson, Execution::Parallel).unwrap();
        let f = build_external(&rho, n, Statistics::Fermion, Execution::Parallel).unwrap();
        for (x, y) in b.coefficients().iter().zip(f.coefficients().iter()) {
            assert_abs_diff_eq!(x.norm(), y.norm(), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(
            b.coherence().unwrap(),
            f.coherence().unwrap(),
            epsilon = 1e-14
        );
    }
}

#[test]
fn double_sum_and_oracle_agree() {
    let mut r = rng(15);
    for (m, n) in [(2, 2), (3, 2), (2, 3), (3, 3), (2, 5)] {
        for _ in 0..3 {
            let rho1 = common::random_density(&mut r, m);
            let rho = product_state(&rho1, n).unwrap();
            let ext = build_external(&rho, n, Statistics::Fermion, Execution::Parallel).unwrap();
            let oracle = coherence_oracle(&rho, n, Execution::Sequential).unwrap();
            assert_abs_diff_eq!(ext.coherence().unwrap(), oracle.value, epsilon = 1e-12);
        }
        let spec = random_spectrum(&mut r, m);
        let rho = product_state(&spec.to_density_matrix(), n).unwrap();
        let ext = build_external(&rho, n, Statistics::Boson, Execution::Sequential).unwrap();
        ext.validate().unwrap();
    }
}

#[test]
fn sequential_and_parallel_are_identical() {
    let mut r = rng(16);
    let rho = random_density(&mut r, 81);
    let a = build_external(&rho, 4, Statistics::Boson, Execution::Sequential).unwrap();
    let b = build_external(&rho, 4, Statistics::Boson, Execution::Parallel).unwrap();
    assert_eq!(a.coefficients(), b.coefficients());
}
