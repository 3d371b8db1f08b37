//! Splitting-based preconditioners and solvers for generalized saddle point
//! systems
//!
//! ```text
//!     [  A   B^T ] [x]   [f]
//!     [ -B   C   ] [y] = [g]
//! ```
//!
//! with A positive definite (possibly nonsymmetric), C symmetric positive
//! semidefinite and B allowed to be rank deficient, so the coefficient matrix
//! may be singular. The crate provides the EPSS family of two-parameter
//! splitting preconditioners, a factorized variant with a five-step apply,
//! right-preconditioned restarted GMRES and FGMRES, a dense spectral
//! certifier for semi-convergence, problem generators, matrix file I/O and a
//! benchmark driver.
//!
//! Start with the runnable examples in `examples/` for end-to-end usage.

pub mod analyzer;
pub mod bench;
pub mod error;
pub mod krylov;
pub mod linalg;
pub mod precond;
pub mod problems;
pub mod saddle;

pub use error::{Error, Result};
