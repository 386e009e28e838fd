//! Internal (unobserved) single- and many-particle states.
//!
//! [`Spectrum`] is the only input the fast coherence routes need; the dense
//! [`DensityMatrix`] exists for the exact small-`N` constructions and for
//! decomposing user-supplied single-particle states.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative gap below which an eigenvalue counts as degenerate with `λ_max`.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;
/// Eigenvalues in `(-NEGATIVE_CLAMP, 0)` are treated as numerical noise.
pub const NEGATIVE_CLAMP: f64 = 1e-10;
/// Largest dimension of an explicitly built many-particle internal space.
pub const MAX_PRODUCT_DIM: usize = 4096;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-9;
const UNIT_NORM_TOL: f64 = 1e-12;

/// Eigenvalues of a single-particle state, normalized and sorted so that
/// `λ_max` comes first.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Normalizes `values` to unit sum and sorts them non-increasing.
    ///
    /// Entries above `-NEGATIVE_CLAMP` are clamped to zero; anything more
    /// negative, non-finite, or an all-zero input is rejected.
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut values = values.into();
        if values.is_empty() {
            return Err(Error::Validation(
                "spectrum needs at least one eigenvalue".into(),
            ));
        }
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::Validation(format!("non-finite eigenvalue {v}")));
            }
            if *v < 0.0 {
                if *v < -NEGATIVE_CLAMP {
                    return Err(Error::Validation(format!(
                        "negative eigenvalue {v} (tolerance {NEGATIVE_CLAMP:e})"
                    )));
                }
                *v = 0.0;
            }
        }
        let total: f64 = values.iter().sum();
        if total <= 0.0 {
            return Err(Error::Validation("eigenvalues sum to zero".into()));
        }
        for v in values.iter_mut() {
            *v /= total;
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { values })
    }

    pub fn pure() -> Self {
        Spectrum { values: vec![1.0] }
    }

    pub fn maximally_mixed(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain(
                "internal dimension must be at least 1".into(),
            ));
        }
        Spectrum::new(vec![1.0; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of eigenvalues `m` (zeros included).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[0]
    }

    /// Multiplicity `d` of `λ_max` under the relative tolerance `tol`.
    pub fn degeneracy(&self, tol: f64) -> usize {
        let top = self.lambda_max();
        self.values
            .iter()
            .take_while(|&&v| (top - v) <= tol * top)
            .count()
    }

    /// `p_l = Σ_j λ_j^l`.
    pub fn power_sum(&self, l: u32) -> f64 {
        self.values.iter().map(|v| v.powi(l as i32)).sum()
    }

    pub fn purity(&self) -> f64 {
        self.power_sum(2)
    }

    /// Drops eigenvalues `<= cutoff` and renormalizes.
    pub fn truncated(&self, cutoff: f64) -> Result<Self> {
        Spectrum::new(
            self.values
                .iter()
                .copied()
                .filter(|&v| v > cutoff)
                .collect::<Vec<_>>(),
        )
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let n = self.len();
        let entries = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(self.values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix { entries }
    }

    /// Plain text, one eigenvalue per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::Validation(format!("line {}: cannot parse {line:?}", lineno + 1))
            })?;
            values.push(v);
        }
        Spectrum::new(values)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Spectrum::parse(&text)
    }
}

/// Dense Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        check_hermitian_unit_trace(&entries)?;
        let min = min_hermitian_eigenvalue(&entries);
        if min < -NEGATIVE_CLAMP {
            return Err(Error::Validation(format!(
                "matrix is not positive semidefinite (eigenvalue {min:e})"
            )));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn from_real(entries: DMatrix<f64>) -> Result<Self> {
        Self::new(entries.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_real(DMatrix::from_fn(
            n,
            n,
            |i, j| if i == j { values[i] } else { 0.0 },
        ))
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let v = unit_vector(psi)?;
        Ok(DensityMatrix {
            entries: &v * v.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `⟨φ|ρ|φ⟩`.
    pub fn expectation(&self, phi: &DVector<Complex64>) -> f64 {
        (phi.adjoint() * &self.entries * phi)[(0, 0)].re
    }
}

fn check_hermitian_unit_trace(m: &DMatrix<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Validation(format!(
            "density matrix must be square and non-empty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            let d = m[(i, j)] - m[(j, i)].conj();
            if !d.norm().is_finite() || d.norm() > HERMITIAN_TOL {
                return Err(Error::Validation(format!(
                    "matrix is not Hermitian at ({i},{j})"
                )));
            }
        }
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::Validation(format!("trace is {tr}, expected 1")));
    }
    Ok(())
}

fn min_hermitian_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn unit_vector(psi: &[Complex64]) -> Result<DVector<Complex64>> {
    let v = DVector::from_column_slice(psi);
    let norm = v.norm();
    if psi.is_empty() || (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::Validation(format!(
            "state vector must have unit norm, got {norm}"
        )));
    }
    Ok(v)
}

/// The `n`-fold tensor power `ρ1p ⊗ … ⊗ ρ1p`, first particle most significant.
pub fn product_state(rho1p: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::Domain("particle count must be at least 1".into()));
    }
    checked_power(rho1p.dim(), n)?;
    let mut acc = rho1p.entries.clone();
    for _ in 1..n {
        acc = acc.kronecker(&rho1p.entries);
    }
    Ok(DensityMatrix { entries: acc })
}

/// `base^n`, failing with a size-limit error beyond [`MAX_PRODUCT_DIM`].
pub(crate) fn checked_power(base: usize, n: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(base);
    }
    if dim > MAX_PRODUCT_DIM {
        return Err(Error::SizeLimit {
            what: "many-particle internal dimension",
            actual: dim,
            limit: MAX_PRODUCT_DIM,
        });
    }
    Ok(dim)
}

/// Eigenvalues of `ρ1p`, clamped at zero and renormalized.
pub fn eigen_spectrum(rho1p: &DensityMatrix) -> Result<Spectrum> {
    check_hermitian_unit_trace(&rho1p.entries)?;
    let eig = rho1p.entries.clone().symmetric_eigenvalues();
    Spectrum::new(eig.iter().copied().collect::<Vec<_>>())
}

/// Eigenvalues together with orthonormal eigenvectors (columns), sorted like
/// [`Spectrum`]. Used for reconstruction checks.
pub fn eigen_decomposition(rho1p: &DensityMatrix) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = rho1p.entries.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(rho1p.dim(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// N unit vectors in a common internal space, one per particle.
#[derive(Clone, Debug)]
pub struct PureProductSpec {
    vectors: Vec<DVector<Complex64>>,
}

impl PureProductSpec {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::Validation("need at least one particle".into()));
        };
        let m = first.len();
        let vectors = vectors
            .iter()
            .map(|v| {
                if v.len() != m {
                    return Err(Error::Dimension {
                        expected: m,
                        found: v.len(),
                    });
                }
                unit_vector(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PureProductSpec { vectors })
    }

    pub fn from_real(vectors: &[&[f64]]) -> Result<Self> {
        Self::new(
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn particles(&self) -> usize {
        self.vectors.len()
    }

    /// `|φ_1⟩⟨φ_1| ⊗ … ⊗ |φ_N⟩⟨φ_N|`.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        checked_power(self.vectors[0].len(), self.vectors.len())?;
        let mut psi = self.vectors[0].clone();
        for v in &self.vectors[1..] {
            psi = psi.kronecker(v);
        }
        Ok(DensityMatrix {
            entries: &psi * psi.adjoint(),
        })
    }
}

/// `ρ1p = (1-ε)|φ⟩⟨φ| + ε ρ̃`.
#[derive(Clone, Debug)]
pub struct FaintDecomposition {
    pub epsilon: f64,
    /// `ρ̃`; absent when `ε = 0`. Hermitian with unit trace, but not
    /// necessarily positive.
    pub remainder: Option<DMatrix<Complex64>>,
    /// Whether `ρ̃` is positive semidefinite up to `-1e-10`.
    pub remainder_is_positive: bool,
}

impl FaintDecomposition {
    pub fn recompose(&self, phi: &[Complex64]) -> DMatrix<Complex64> {
        let v = DVector::from_column_slice(phi);
        let mut m = (&v * v.adjoint()) * Complex64::new(1.0 - self.epsilon, 0.0);
        if let Some(r) = &self.remainder {
            m += r * Complex64::new(self.epsilon, 0.0);
        }
        m
    }
}

/// Splits off the dominant pure component along `φ`. Requires `ε < 1/2`.
pub fn faint_decomposition(rho1p: &DensityMatrix, phi: &[Complex64]) -> Result<FaintDecomposition> {
    if phi.len() != rho1p.dim() {
        return Err(Error::Dimension {
            expected: rho1p.dim(),
            found: phi.len(),
        });
    }
    let v = unit_vector(phi)?;
    let epsilon = (1.0 - rho1p.expectation(&v)).max(0.0);
    if epsilon >= 0.5 {
        return Err(Error::Regime(format!(
            "faint decomposition requires ε < 1/2 (ε ≪ 1/2 for accuracy), got ε = {epsilon}"
        )));
    }
    if epsilon < 1e-14 {
        return Ok(FaintDecomposition {
            epsilon: 0.0,
            remainder: None,
            remainder_is_positive: true,
        });
    }
    let projector = &v * v.adjoint();
    let remainder = (&rho1p.entries - projector * Complex64::new(1.0 - epsilon, 0.0))
        / Complex64::new(epsilon, 0.0);
    let positive = min_hermitian_eigenvalue(&remainder) >= -NEGATIVE_CLAMP;
    Ok(FaintDecomposition {
        epsilon,
        remainder: Some(remainder),
        remainder_is_positive: positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn spectrum_normalizes_and_sorts() {
        let s = Spectrum::new(vec![1.0, 3.0, 0.0]).unwrap();
        assert_eq!(s.values(), &[0.75, 0.25, 0.0]);
        assert_eq!(s.lambda_max(), 0.75);
        assert!(Spectrum::new(vec![]).is_err());
        assert!(Spectrum::new(vec![0.5, -0.1]).is_err());
        assert!(Spectrum::new(vec![0.0, 0.0]).is_err());
        assert_eq!(
            Spectrum::new(vec![1.0, -1e-12]).unwrap().values(),
            &[1.0, 0.0]
        );
    }

    #[test]
    fn degeneracy_counts() {
        let s = Spectrum::new(vec![0.4, 0.4, 0.2]).unwrap();
        assert_eq!(s.degeneracy(DEFAULT_DEGENERACY_TOL), 2);
        let near = Spectrum::new(vec![0.5, 0.5 * (1.0 - 1e-6)]).unwrap();
        assert_eq!(near.degeneracy(DEFAULT_DEGENERACY_TOL), 1);
        assert_eq!(near.degeneracy(1e-5), 2);
        assert_eq!(Spectrum::maximally_mixed(4).unwrap().degeneracy(1e-9), 4);
    }

    #[test]
    fn spectrum_file_format() {
        let text = "# thermal levels\n0.5\n\n0.25 # second\n0.25\n";
        let s = Spectrum::parse(text).unwrap();
        assert_eq!(s.values(), &[0.5, 0.25, 0.25]);
        let unnormalized = Spectrum::parse("2\n2\n").unwrap();
        assert_eq!(unnormalized.values(), &[0.5, 0.5]);
        assert!(Spectrum::parse("0.5\nabc\n").is_err());
    }

    #[test]
    fn product_state_examples() {
        let one = DensityMatrix::diagonal(&[1.0]).unwrap();
        let p = product_state(&one, 3).unwrap();
        assert_eq!(p.dim(), 1);
        assert_abs_diff_eq!(p.get(0, 0).re, 1.0);

        let half = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let p = product_state(&half, 2).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(p.get(i, i).re, 0.25);
        }

        let biased = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let p = product_state(&biased, 2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| p.get(i, i).re).collect();
        for (got, want) in diag.iter().zip([0.49, 0.21, 0.21, 0.09]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn product_state_guard() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!(product_state(&rho, 12).is_ok());
        assert!(matches!(
            product_state(&rho, 13),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn product_spectrum_is_all_products() {
        let single = [0.6, 0.3, 0.1];
        let rho = DensityMatrix::diagonal(&single).unwrap();
        for n in 1..=3 {
            let p = product_state(&rho, n).unwrap();
            assert_abs_diff_eq!(p.trace().re, 1.0, epsilon = 1e-12);
            let got = eigen_spectrum(&p).unwrap();
            let mut want = vec![1.0];
            for _ in 0..n {
                want = want
                    .iter()
                    .flat_map(|a| single.iter().map(move |b| a * b))
                    .collect();
            }
            let want = Spectrum::new(want).unwrap();
            for (g, w) in got.values().iter().zip(want.values()) {
                assert_abs_diff_eq!(*g, *w, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn eigen_spectrum_examples() {
        let s = eigen_spectrum(&DensityMatrix::diagonal(&[0.5, 0.5]).unwrap()).unwrap();
        assert_eq!(s.values(), &[0.5, 0.5]);

        let proj = DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap();
        let s = eigen_spectrum(&proj).unwrap();
        assert_abs_diff_eq!(s.values()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.values()[1], 0.0, epsilon = 1e-15);

        let m =
            DensityMatrix::from_real(DMatrix::from_row_slice(2, 2, &[0.6, 0.2, 0.2, 0.4])).unwrap();
        let s = eigen_spectrum(&m).unwrap();
        assert_abs_diff_eq!(s.values()[0], 0.5 + 0.05f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[1], 0.5 - 0.05f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn eigen_reconstruction() {
        let entries = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.5),
                Complex64::new(0.1, 0.05),
                c(0.0),
                Complex64::new(0.1, -0.05),
                c(0.3),
                Complex64::new(0.0, 0.02),
                c(0.0),
                Complex64::new(0.0, -0.02),
                c(0.2),
            ],
        );
        let rho = DensityMatrix::new(entries.clone()).unwrap();
        let (vals, vecs) = eigen_decomposition(&rho);
        let mut rebuilt = DMatrix::zeros(3, 3);
        for (j, v) in vals.iter().enumerate() {
            let col = vecs.column(j);
            rebuilt += (col * col.adjoint()) * c(*v);
        }
        assert!((rebuilt - entries).camax() < 1e-8);
    }

    #[test]
    fn spectrum_round_trip() {
        let s = Spectrum::new(vec![0.45, 0.3, 0.2, 0.05]).unwrap();
        let back = eigen_spectrum(&s.to_density_matrix()).unwrap();
        for (a, b) in s.values().iter().zip(back.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn density_matrix_validation() {
        let non_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(non_herm.clone()).is_err());
        assert!(eigen_spectrum(&DensityMatrix { entries: non_herm }).is_err());
        assert!(DensityMatrix::diagonal(&[0.6, 0.6]).is_err());
        assert!(DensityMatrix::diagonal(&[1.2, -0.2]).is_err());
    }

    #[test]
    fn faint_examples() {
        let phi = [c(1.0), c(0.0)];
        let pure = DensityMatrix::pure(&phi).unwrap();
        let d = faint_decomposition(&pure, &phi).unwrap();
        assert_eq!(d.epsilon, 0.0);
        assert!(d.remainder.is_none());

        let rho = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let d = faint_decomposition(&rho, &phi).unwrap();
        assert_abs_diff_eq!(d.epsilon, 0.1, epsilon = 1e-15);
        let r = d.remainder.as_ref().unwrap();
        assert_abs_diff_eq!(r[(0, 0)].re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[(1, 1)].re, 1.0, epsilon = 1e-14);
        assert!(d.remainder_is_positive);
        assert!((d.recompose(&phi) - rho.entries()).camax() < 1e-12);

        let bad = DensityMatrix::diagonal(&[0.4, 0.6]).unwrap();
        assert!(matches!(
            faint_decomposition(&bad, &phi),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn faint_remainder_can_be_indefinite() {
        // φ tilted away from the dominant eigenvector
        let rho = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let t: f64 = 0.2;
        let phi = [c(t.cos()), c(t.sin())];
        let d = faint_decomposition(&rho, &phi).unwrap();
        assert!(!d.remainder_is_positive);
        let r = d.remainder.as_ref().unwrap();
        assert_abs_diff_eq!(r.trace().re, 1.0, epsilon = 1e-12);
        assert!((d.recompose(&phi) - rho.entries()).camax() < 1e-12);
    }

    #[test]
    fn pure_product_spec() {
        let spec = PureProductSpec::from_real(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let rho = spec.to_density_matrix().unwrap();
        assert_eq!(rho.dim(), 4);
        assert_abs_diff_eq!(rho.get(1, 1).re, 1.0);
        assert!(PureProductSpec::from_real(&[&[1.0, 1.0]]).is_err());
        assert!(PureProductSpec::from_real(&[&[1.0, 0.0], &[1.0]]).is_err());
    }
}
