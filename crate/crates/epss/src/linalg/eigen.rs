//! Dense spectral helpers backed by nalgebra's Schur and SVD routines.
//! These paths are guarded to desk scale; the iterative solvers never call
//! them.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::sparse::SparseMatrix;
use crate::linalg::sparse_lu::symmetric_pd_probe;

/// Order above which dense spectral routines refuse to run.
pub const DENSE_GUARD: usize = 2000;

/// Eigenvalues of a real matrix as (re, im) pairs, sorted by (re, im) for
/// reproducible output. Complex values come in conjugate pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    values: Vec<(f64, f64)>,
}

impl ComplexSpectrum {
    pub fn new(mut values: Vec<(f64, f64)>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        ComplexSpectrum { values }
    }

    pub fn values(&self) -> &[(f64, f64)] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|&(re, im)| (re * re + im * im).sqrt()).fold(0.0, f64::max)
    }

    /// Largest modulus over eigenvalues away from 1, where "away" means
    /// |lambda - 1| > unit_tol. Returns 0 when every eigenvalue sits at 1.
    pub fn radius_excluding_unit(&self, unit_tol: f64) -> f64 {
        self.values
            .iter()
            .filter(|&&(re, im)| ((re - 1.0) * (re - 1.0) + im * im).sqrt() > unit_tol)
            .map(|&(re, im)| (re * re + im * im).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn count_near_one(&self, unit_tol: f64) -> usize {
        self.values
            .iter()
            .filter(|&&(re, im)| ((re - 1.0) * (re - 1.0) + im * im).sqrt() <= unit_tol)
            .count()
    }

    /// Eigenvalues on the unit circle but distinct from 1.
    pub fn unit_modulus_excluding_one(&self, unit_tol: f64) -> Vec<(f64, f64)> {
        self.values
            .iter()
            .copied()
            .filter(|&(re, im)| {
                let m = (re * re + im * im).sqrt();
                (m - 1.0).abs() <= unit_tol
                    && ((re - 1.0) * (re - 1.0) + im * im).sqrt() > unit_tol
            })
            .collect()
    }
}

fn guard_square(a: &DenseMatrix, what: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::dim(format!("{what} requires a square matrix")));
    }
    if a.rows() > DENSE_GUARD {
        return Err(Error::invalid(format!(
            "{what}: order {} exceeds the dense guard {DENSE_GUARD}",
            a.rows()
        )));
    }
    Ok(())
}

/// Full eigenvalue set of a real square matrix via the real Schur form.
pub fn dense_eigenvalues(a: &DenseMatrix) -> Result<ComplexSpectrum> {
    guard_square(a, "dense_eigenvalues")?;
    let n = a.rows();
    if n == 0 {
        return Ok(ComplexSpectrum::new(Vec::new()));
    }
    let schur = nalgebra::linalg::Schur::try_new(a.to_na(), f64::EPSILON, 100 * n + 1000)
        .ok_or_else(|| Error::NonConvergence("Schur iteration stalled".to_string()))?;
    let eig = schur.complex_eigenvalues();
    Ok(ComplexSpectrum::new(eig.iter().map(|c| (c.re, c.im)).collect()))
}

fn svd_of(a: &DenseMatrix, want_v: bool) -> Result<nalgebra::linalg::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>> {
    let max_dim = a.rows().max(a.cols());
    if max_dim > DENSE_GUARD {
        return Err(Error::invalid(format!(
            "svd: dimension {max_dim} exceeds the dense guard {DENSE_GUARD}"
        )));
    }
    nalgebra::linalg::SVD::try_new(a.to_na(), false, want_v, f64::EPSILON, 100 * max_dim + 1000)
        .ok_or_else(|| Error::NonConvergence("SVD iteration stalled".to_string()))
}

pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let svd = svd_of(a, false)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(s)
}

/// Number of singular values above rel_tol times the largest one.
pub fn rank_with_tol(a: &DenseMatrix, rel_tol: f64) -> Result<usize> {
    let s = singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&v| v > rel_tol * smax).count())
}

/// Orthonormal basis of the numerical nullspace: right singular vectors whose
/// singular value is at most rel_tol times the largest. Columns of the result.
pub fn nullspace(a: &DenseMatrix, rel_tol: f64) -> Result<DenseMatrix> {
    let svd = svd_of(a, true)?;
    let vt = svd.v_t.as_ref().expect("requested right singular vectors");
    let s = &svd.singular_values;
    let smax = s.iter().copied().fold(0.0f64, f64::max);
    let mut keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= rel_tol * smax).collect();
    // also keep directions the factorization did not span (rank-deficient wide case)
    keep.sort_unstable();
    let cols = a.cols();
    let mut out = DenseMatrix::zeros(cols, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for j in 0..cols {
            out.set(j, c, vt[(i, j)]);
        }
    }
    Ok(out)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(s: &DenseMatrix) -> Result<Vec<f64>> {
    guard_square(s, "symmetric_eigenvalues")?;
    let n = s.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let eig =
        nalgebra::linalg::SymmetricEigen::try_new(s.to_na(), f64::EPSILON, 100 * n + 1000)
            .ok_or_else(|| Error::NonConvergence("symmetric eigensolve stalled".to_string()))?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// Positive definiteness of the symmetric part. Dense orders use a Cholesky
/// attempt; larger matrices use the sparse no-exchange pivot probe.
pub fn is_positive_definite(a: &SparseMatrix) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::dim("is_positive_definite requires a square matrix".to_string()));
    }
    let sym = a.symmetric_part()?;
    if a.rows() <= DENSE_GUARD {
        Ok(nalgebra::linalg::Cholesky::new(sym.to_dense().to_na()).is_some())
    } else {
        Ok(symmetric_pd_probe(&sym))
    }
}

/// Positive semidefiniteness of the symmetric part. Dense orders check the
/// smallest symmetric eigenvalue against a relative slack; larger matrices
/// probe a slightly shifted matrix.
pub fn is_positive_semidefinite(a: &SparseMatrix) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::dim("is_positive_semidefinite requires a square matrix".to_string()));
    }
    let sym = a.symmetric_part()?;
    let scale = sym.max_abs();
    if scale == 0.0 {
        return Ok(true);
    }
    if a.rows() <= DENSE_GUARD {
        let eigs = symmetric_eigenvalues(&sym.to_dense())?;
        Ok(eigs.first().map_or(true, |&lo| lo >= -1e-10 * scale))
    } else {
        let shifted = sym.add(&SparseMatrix::scaled_identity(a.rows(), 1e-10 * scale))?;
        Ok(symmetric_pd_probe(&shifted))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_rotation_block() {
        // [[0, -1], [1, 0]] has eigenvalues +-i
        let a = DenseMatrix::from_row_major(2, 2, vec![0.0, -1.0, 1.0, 0.0]).unwrap();
        let s = dense_eigenvalues(&a).unwrap();
        let v = s.values();
        assert!((v[0].0).abs() < 1e-12 && (v[0].1 + 1.0).abs() < 1e-12);
        assert!((v[1].0).abs() < 1e-12 && (v[1].1 - 1.0).abs() < 1e-12);
        assert!((s.spectral_radius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant() {
        let a = DenseMatrix::from_row_major(
            3,
            3,
            vec![4.0, 1.0, -2.0, 0.5, 3.0, 1.0, -1.0, 0.0, 2.0],
        )
        .unwrap();
        let s = dense_eigenvalues(&a).unwrap();
        let tr: f64 = s.values().iter().map(|v| v.0).sum();
        assert!((tr - 9.0).abs() < 1e-10);
        // determinant via product of complex eigenvalues
        let (mut re, mut im) = (1.0f64, 0.0f64);
        for &(a, b) in s.values() {
            let nre = re * a - im * b;
            im = re * b + im * a;
            re = nre;
        }
        // det computed by cofactor expansion: 4(6-0) - 1(1+1) + (-2)(0+3) = 16
        assert!((re - 16.0).abs() < 1e-9, "det {re}");
        assert!(im.abs() < 1e-9);
    }

    #[test]
    fn radius_excluding_unit_skips_ones() {
        let s = ComplexSpectrum::new(vec![(1.0, 0.0), (0.5, 0.2), (1.0 + 1e-12, 0.0)]);
        let nu = s.radius_excluding_unit(1e-8);
        assert!((nu - (0.25f64 + 0.04).sqrt()).abs() < 1e-14);
        assert_eq!(s.count_near_one(1e-8), 2);
    }

    #[test]
    fn rank_and_nullspace_of_rank_deficient() {
        // rank-1 outer product
        let a = DenseMatrix::from_fn(4, 3, |i, j| ((i + 1) * (j + 1)) as f64);
        assert_eq!(rank_with_tol(&a, 1e-8).unwrap(), 1);
        let ns = nullspace(&a, 1e-8).unwrap();
        assert_eq!(ns.cols(), 2);
        // A times each nullspace column vanishes
        for c in 0..ns.cols() {
            let col = ns.column(c);
            let y = a.mul_vec(&col);
            assert!(y.iter().all(|v| v.abs() < 1e-10));
        }
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = DenseMatrix::zeros(3, 3);
        assert_eq!(rank_with_tol(&z, 1e-8).unwrap(), 0);
        let ns = nullspace(&z, 1e-8).unwrap();
        assert_eq!(ns.cols(), 3);
    }

    #[test]
    fn definiteness_checks() {
        let spd = SparseMatrix::from_triplets(
            2,
            2,
            &[(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)],
        )
        .unwrap();
        assert!(is_positive_definite(&spd).unwrap());
        assert!(is_positive_semidefinite(&spd).unwrap());

        let psd = SparseMatrix::from_triplets(
            2,
            2,
            &[(0, 0, 1.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 1.0)],
        )
        .unwrap();
        assert!(!is_positive_definite(&psd).unwrap());
        assert!(is_positive_semidefinite(&psd).unwrap());

        let indef =
            SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, -1.0)]).unwrap();
        assert!(!is_positive_definite(&indef).unwrap());
        assert!(!is_positive_semidefinite(&indef).unwrap());

        // positive definiteness of a nonsymmetric matrix is that of its
        // symmetric part
        let skewed = SparseMatrix::from_triplets(
            2,
            2,
            &[(0, 0, 1.0), (0, 1, 5.0), (1, 0, -5.0), (1, 1, 1.0)],
        )
        .unwrap();
        assert!(is_positive_definite(&skewed).unwrap());
    }
}
