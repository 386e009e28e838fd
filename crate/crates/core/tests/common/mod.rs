#![allow(dead_code)]

use mbcoh_core::state::DensityMatrix;
use mbcoh_core::Spectrum;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G G† / tr(G G†)` for a complex Gaussian-ish `G`; full rank almost surely.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= Complex64::new(tr, 0.0);
    // exact Hermiticity
    let herm = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(herm).unwrap()
}

pub fn random_spectrum(rng: &mut ChaCha8Rng, m: usize) -> Spectrum {
    let raw: Vec<f64> = (0..m)
        .map(|_| rng.gen_range(0.0..1.0f64).powi(2) + 1e-3)
        .collect();
    Spectrum::new(raw).unwrap()
}

/// Matrix of `Π_π|I_1..I_N⟩ = |I_π(1)..I_π(N)⟩` on `(C^m)^⊗N`, first factor
/// most significant.
pub fn permutation_matrix(images: &[usize], m: usize) -> DMatrix<Complex64> {
    let n = images.len();
    let dim = m.pow(n as u32);
    let digits = |mut x: usize| {
        let mut d = vec![0; n];
        for slot in d.iter_mut().rev() {
            *slot = x % m;
            x /= m;
        }
        d
    };
    let index = |d: &[usize]| d.iter().fold(0, |acc, &v| acc * m + v);
    let mut p = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let i = digits(col);
        let j: Vec<usize> = (0..n).map(|a| i[images[a]]).collect();
        p[(index(&j), col)] = Complex64::new(1.0, 0.0);
    }
    p
}
