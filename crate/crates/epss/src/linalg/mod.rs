//! Sparse and dense linear algebra kernels used throughout the crate.

pub mod dense;
pub mod eigen;
pub mod lu;
pub mod sparse;
pub mod sparse_lu;
pub mod vecops;

pub use dense::{DenseLu, DenseMatrix};
pub use eigen::{
    dense_eigenvalues, is_positive_definite, is_positive_semidefinite, nullspace, rank_with_tol,
    singular_values, symmetric_eigenvalues, ComplexSpectrum, DENSE_GUARD,
};
pub use lu::LuFactors;
pub use sparse::SparseMatrix;
pub use sparse_lu::{rcm_order, SparseLu};
