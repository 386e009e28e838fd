//! The reduced external many-body state in the permuted-mode basis.
//!
//! With one particle per external mode, the external state lives on the
//! `N!`-dimensional span of `|E_π⟩ = |E_π(1)⟩ ⊗ … ⊗ |E_π(N)⟩`. Entries are
//! indexed by pairs of permutations in lexicographic order.
//!
//! Convention for the internal permutation operators:
//! `Π_π |I_1 … I_N⟩ = |I_π(1) … I_π(N)⟩`. This makes `π ↦ Π_π` an
//! anti-homomorphism (`Π_a Π_b = Π_{b∘a}`), and `Π_π'^† Π_π = Π_{π∘π'^{-1}}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::state::{checked_power, DensityMatrix, NEGATIVE_CLAMP};
use crate::symgroup::{self, factorial, Permutation};

/// Largest particle number for explicit `N! × N!` external states.
pub const MAX_EXTERNAL_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// `(-1)^π` for this particle species.
    pub fn sign(self, p: &Permutation) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => f64::from(p.sign()),
        }
    }
}

/// Recovers the single-particle dimension `m` from `dim = m^n`.
pub fn single_particle_dim(rho: &DensityMatrix, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("particle count must be at least 1".into()));
    }
    let dim = rho.dim();
    let guess = (dim as f64).powf(1.0 / n as f64).round() as usize;
    for m in guess.saturating_sub(1)..=guess + 1 {
        if m > 0 && m.checked_pow(n as u32) == Some(dim) {
            return Ok(m);
        }
    }
    Err(Error::Validation(format!(
        "internal dimension {dim} is not a {n}-th power"
    )))
}

fn decode(mut index: usize, m: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = index % m;
        index /= m;
    }
}

fn encode(digits: &[usize], m: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * m + d)
}

/// `tr(Π_π ρ)` for an `n`-particle state over an `m`-dimensional internal space.
pub fn permutation_trace(rho: &DensityMatrix, m: usize, p: &Permutation) -> Complex64 {
    let n = p.len();
    let dim = rho.dim();
    let mut from = vec![0; n];
    let mut to = vec![0; n];
    let mut acc = Complex64::new(0.0, 0.0);
    for col in 0..dim {
        decode(col, m, &mut from);
        // ⟨I|Π_π|J⟩ = 1 iff J_π(α) = I_α
        for (a, &d) in from.iter().enumerate() {
            to[p.apply(a)] = d;
        }
        acc += rho.get(encode(&to, m), col);
    }
    acc
}

/// `tr(Π_π ρ)` for every `π` in lexicographic order.
pub fn permutation_traces(
    rho: &DensityMatrix,
    n: usize,
    exec: Execution,
) -> Result<(Vec<Permutation>, Vec<Complex64>)> {
    let m = single_particle_dim(rho, n)?;
    checked_power(m, n)?;
    let perms = symgroup::all(n)?;
    let traces = exec::map(exec, &perms, |p| permutation_trace(rho, m, p));
    Ok((perms, traces))
}

#[derive(Clone, Debug)]
pub struct ExternalState {
    n: usize,
    statistics: Statistics,
    perms: Vec<Permutation>,
    coeff: DMatrix<Complex64>,
}

impl ExternalState {
    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// Row/column labels in lexicographic order.
    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.coeff
    }

    pub fn trace(&self) -> f64 {
        self.coeff.trace().re
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let k = self.coeff.nrows();
        for i in 0..k {
            for j in i..k {
                if (self.coeff[(i, j)] - self.coeff[(j, i)].conj()).norm() > 1e-12 {
                    return Err(Error::Validation(format!(
                        "external state not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        if (self.trace() - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "external state trace {} != 1",
                self.trace()
            )));
        }
        let min = self
            .coeff
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -NEGATIVE_CLAMP {
            return Err(Error::Validation(format!(
                "external state not positive (eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    /// Normalized coherence as the mean modulus of the off-diagonal entries.
    pub fn coherence(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::UndefinedOrder(self.n));
        }
        let k = self.coeff.nrows();
        let mut off = 0.0;
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    off += self.coeff[(i, j)].norm();
                }
            }
        }
        Ok(off / (factorial(self.n) as f64 - 1.0))
    }

    /// `tr(Π_S ρ_E)` for bosons, `tr(Π_A ρ_E)` for fermions.
    ///
    /// `⟨E_π'|Π_τ|E_π⟩ = δ(π', π∘τ)`, so the triple sum over `(τ, π, π')`
    /// collapses to `τ = π^{-1}∘π'`.
    pub fn symmetric_projection(&self) -> f64 {
        let k = self.perms.len();
        let inverses: Vec<Permutation> = self.perms.iter().map(Permutation::inverse).collect();
        let mut acc = 0.0;
        for (i, inv) in inverses.iter().enumerate() {
            for (j, p) in self.perms.iter().enumerate() {
                let tau = inv.compose(p).expect("permutations share n");
                acc += self.statistics.sign(&tau) * self.coeff[(i, j)].re;
            }
        }
        acc / k as f64
    }
}

/// `[ρ_E]_{π,π'} = (-1)^{ππ'} tr(Π_π ρ Π_π'^†) / N!`.
pub fn build_external(
    rho: &DensityMatrix,
    n: usize,
    statistics: Statistics,
    exec: Execution,
) -> Result<ExternalState> {
    if n > MAX_EXTERNAL_N {
        return Err(Error::SizeLimit {
            what: "particle count for the explicit external state",
            actual: n,
            limit: MAX_EXTERNAL_N,
        });
    }
    let (perms, traces) = permutation_traces(rho, n, exec)?;
    let k = perms.len();
    let norm = 1.0 / k as f64;
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let rows = exec::map_range(exec, k, |i| {
        (0..k)
            .map(|j| {
                let sigma = perms[i]
                    .compose(&inverses[j])
                    .expect("permutations share n");
                let sign = statistics.sign(&perms[i]) * statistics.sign(&perms[j]);
                traces[sigma.rank()] * (sign * norm)
            })
            .collect::<Vec<_>>()
    });
    let coeff = DMatrix::from_fn(k, k, |i, j| rows[i][j]);
    Ok(ExternalState {
        n,
        statistics,
        perms,
        coeff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{product_state, PureProductSpec};
    use approx::assert_abs_diff_eq;

    fn identical_pure(n: usize) -> DensityMatrix {
        let specs: Vec<&[f64]> = vec![&[0.6, 0.8]; n];
        PureProductSpec::from_real(&specs)
            .unwrap()
            .to_density_matrix()
            .unwrap()
    }

    #[test]
    fn identical_pure_bosons_are_fully_coherent() {
        let ext = build_external(
            &identical_pure(2),
            2,
            Statistics::Boson,
            Execution::Sequential,
        )
        .unwrap();
        for z in ext.coefficients().iter() {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-14);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(ext.coherence().unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ext.symmetric_projection(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn orthogonal_pure_is_incoherent() {
        let rho = PureProductSpec::from_real(&[&[1.0, 0.0], &[0.0, 1.0]])
            .unwrap()
            .to_density_matrix()
            .unwrap();
        let ext = build_external(&rho, 2, Statistics::Boson, Execution::Sequential).unwrap();
        let c = ext.coefficients();
        assert_abs_diff_eq!(c[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c[(0, 1)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ext.coherence().unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ext.symmetric_projection(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn fermion_sign_flip() {
        let ext = build_external(
            &identical_pure(2),
            2,
            Statistics::Fermion,
            Execution::Sequential,
        )
        .unwrap();
        // row/column 0 is the identity, 1 is the swap
        assert_abs_diff_eq!(ext.coefficients()[(0, 1)].re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ext.coefficients()[(0, 0)].re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn maximally_mixed_pair_projection() {
        let rho = product_state(&DensityMatrix::diagonal(&[0.5, 0.5]).unwrap(), 2).unwrap();
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let ext = build_external(&rho, 2, stats, Execution::Sequential).unwrap();
            assert_abs_diff_eq!(ext.symmetric_projection(), 0.75, epsilon = 1e-14);
            ext.validate().unwrap();
        }
    }

    #[test]
    fn guards() {
        let rho = DensityMatrix::diagonal(&[1.0]).unwrap();
        assert!(matches!(
            build_external(&rho, 7, Statistics::Boson, Execution::Sequential),
            Err(Error::SizeLimit { .. })
        ));
        let rho = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        assert!(matches!(
            build_external(&rho, 2, Statistics::Boson, Execution::Sequential),
            Err(Error::Validation(_))
        ));
        let one = build_external(
            &DensityMatrix::diagonal(&[1.0]).unwrap(),
            1,
            Statistics::Boson,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(one.coherence(), Err(Error::UndefinedOrder(1)));
    }

    #[test]
    fn single_particle_dim_recovery() {
        let rho = product_state(&DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap(), 3).unwrap();
        assert_eq!(single_particle_dim(&rho, 3).unwrap(), 3);
        assert!(single_particle_dim(&rho, 2).is_err());
    }
}
