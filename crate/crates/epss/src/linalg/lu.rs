//! Unified LU handle over the dense and sparse factorization paths.

use crate::error::Result;
use crate::linalg::dense::{DenseLu, DenseMatrix};
use crate::linalg::sparse::SparseMatrix;
use crate::linalg::sparse_lu::SparseLu;

/// Threshold below which a sparse factorization request may fall back to the
/// dense routine. Both paths solve the same systems to rounding error.
pub const SPARSE_DENSE_FALLBACK: usize = 5000;

#[derive(Debug, Clone)]
pub enum LuFactors {
    Dense(DenseLu),
    Sparse(SparseLu),
}

impl LuFactors {
    pub fn of_dense(a: &DenseMatrix) -> Result<Self> {
        Ok(LuFactors::Dense(DenseLu::factor(a)?))
    }

    pub fn of_sparse(a: &SparseMatrix) -> Result<Self> {
        Ok(LuFactors::Sparse(SparseLu::factor(a)?))
    }

    /// Dense route for small orders when the matrix is nearly full, sparse
    /// otherwise.
    pub fn auto(a: &SparseMatrix) -> Result<Self> {
        let n = a.rows();
        let dense_enough = n <= 64 || (n <= SPARSE_DENSE_FALLBACK && a.nnz() * 2 > n * n);
        if dense_enough {
            Self::of_dense(&a.to_dense())
        } else {
            Self::of_sparse(a)
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, LuFactors::Dense(_))
    }

    pub fn order(&self) -> usize {
        match self {
            LuFactors::Dense(f) => f.order(),
            LuFactors::Sparse(f) => f.order(),
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match self {
            LuFactors::Dense(f) => f.solve(rhs),
            LuFactors::Sparse(f) => f.solve(rhs),
        }
    }

    pub fn solve_into(&self, rhs: &[f64], out: &mut [f64]) {
        let x = self.solve(rhs);
        out.copy_from_slice(&x);
    }
}
