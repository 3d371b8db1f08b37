//! Test-problem factories and on-disk exchange.
//!
//! Two generators are provided: a finite-difference Oseen-like cavity flow
//! (structurally faithful to the stabilized Q1-P0 benchmark family: A is
//! positive definite and nonsymmetric, B is rank deficient, C is symmetric
//! positive semidefinite with the constant pressure mode in its nullspace)
//! and a seeded synthetic family with prescribed rank structure. Systems can
//! be stored as three MatrixMarket files plus a JSON manifest.

pub mod matrix_market;
pub mod oseen;
pub mod synthetic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::saddle::{BlockVector, SaddleSystem};

pub use matrix_market::{
    read_matrix_market, read_system, write_matrix_market, write_system, SystemManifest,
};
pub use oseen::{gen_oseen, OseenProblem};
pub use synthetic::gen_synthetic_singular;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    OseenFd,
    SyntheticSingular,
    Imported,
}

/// Everything a generator needs. Irrelevant fields are ignored by each kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    /// Cells per side of the square cavity (oseen-fd).
    pub q: usize,
    /// Viscosity (oseen-fd).
    pub viscosity: f64,
    /// Wind-field label. Only the built-in recirculating field exists; the
    /// label travels into manifests so imported results stay traceable.
    pub wind: String,
    /// RNG seed (synthetic-singular).
    pub seed: u64,
    /// Velocity-space dimension (synthetic-singular).
    pub n: usize,
    /// Pressure-space dimension (synthetic-singular).
    pub m: usize,
    /// Requested rank of B (synthetic-singular).
    pub rank_b: usize,
    /// Requested dimension of null(C + C^T) (synthetic-singular).
    pub null_dim_c: usize,
}

impl ProblemSpec {
    pub fn oseen(q: usize) -> Self {
        ProblemSpec {
            kind: ProblemKind::OseenFd,
            q,
            viscosity: 0.01,
            wind: "recirculating".to_string(),
            seed: 0,
            n: 0,
            m: 0,
            rank_b: 0,
            null_dim_c: 0,
        }
    }

    pub fn synthetic(n: usize, m: usize, rank_b: usize, null_dim_c: usize, seed: u64) -> Self {
        ProblemSpec {
            kind: ProblemKind::SyntheticSingular,
            q: 0,
            viscosity: 0.0,
            wind: String::new(),
            seed,
            n,
            m,
            rank_b,
            null_dim_c,
        }
    }
}

/// Dispatches to the generator named by the spec.
pub fn generate(spec: &ProblemSpec) -> Result<SaddleSystem> {
    match spec.kind {
        ProblemKind::OseenFd => Ok(gen_oseen(spec)?.system),
        ProblemKind::SyntheticSingular => gen_synthetic_singular(spec),
        ProblemKind::Imported => {
            Err(Error::invalid("imported problems are read from a manifest, not generated"))
        }
    }
}

/// The benchmark right-hand side b = K e with e the all-ones vector. Always
/// consistent, including for singular systems.
pub fn rhs_from_ones(sys: &SaddleSystem) -> BlockVector {
    let ones = vec![1.0; sys.order()];
    let mut out = vec![0.0; sys.order()];
    sys.apply_flat(&ones, &mut out);
    BlockVector::split(sys.n(), sys.m(), &out).expect("sizes agree")
}
