//! Block model of the generalized saddle point system
//!
//! ```text
//!     [  A   B^T ] [x]   [f]
//!     [ -B   C   ] [y] = [g]
//! ```
//!
//! with A of order n, C of order m and B of shape m x n, m <= n.

use crate::error::{Error, Result};
use crate::linalg::eigen::{self, DENSE_GUARD};
use crate::linalg::sparse::SparseMatrix;
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone)]
pub struct SaddleSystem {
    a: SparseMatrix,
    b: SparseMatrix,
    c: SparseMatrix,
}

impl SaddleSystem {
    pub fn new(a: SparseMatrix, b: SparseMatrix, c: SparseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::dim("A block must be square".to_string()));
        }
        if !c.is_square() {
            return Err(Error::dim("C block must be square".to_string()));
        }
        if b.rows() != c.rows() || b.cols() != a.rows() {
            return Err(Error::dim(format!(
                "B block is {}x{}, expected {}x{}",
                b.rows(),
                b.cols(),
                c.rows(),
                a.rows()
            )));
        }
        if b.rows() > b.cols() {
            return Err(Error::invalid(format!(
                "second block may not outsize the first: m = {} > n = {}",
                b.rows(),
                b.cols()
            )));
        }
        Ok(SaddleSystem { a, b, c })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.c.rows()
    }

    pub fn order(&self) -> usize {
        self.n() + self.m()
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }

    pub fn b(&self) -> &SparseMatrix {
        &self.b
    }

    pub fn c(&self) -> &SparseMatrix {
        &self.c
    }

    /// The assembled (n+m) x (n+m) coefficient matrix.
    pub fn assemble_full(&self) -> SparseMatrix {
        SparseMatrix::block_2x2(&self.a, &self.b.transpose(), &self.b.scaled(-1.0), &self.c)
            .expect("validated blocks conform")
    }

    /// Applies the coefficient matrix blockwise.
    pub fn apply_blocks(&self, u: &BlockVector) -> Result<BlockVector> {
        if u.x.len() != self.n() || u.y.len() != self.m() {
            return Err(Error::dim(format!(
                "block vector is ({}, {}), system wants ({}, {})",
                u.x.len(),
                u.y.len(),
                self.n(),
                self.m()
            )));
        }
        let mut x = self.a.spmv(&u.x)?;
        let bty = self.b.spmv_transpose(&u.y)?;
        for (xi, bi) in x.iter_mut().zip(&bty) {
            *xi += bi;
        }
        let bx = self.b.spmv(&u.x)?;
        let mut y = self.c.spmv(&u.y)?;
        for (yi, bi) in y.iter_mut().zip(&bx) {
            *yi -= bi;
        }
        Ok(BlockVector { x, y })
    }

    /// Flat-vector apply over a concatenated [x; y] layout.
    pub fn apply_flat(&self, u: &[f64], out: &mut [f64]) {
        assert_eq!(u.len(), self.order());
        assert_eq!(out.len(), self.order());
        let n = self.n();
        let (ux, uy) = u.split_at(n);
        let (ox, oy) = out.split_at_mut(n);
        self.a.spmv_into(ux, ox);
        for i in 0..self.b.rows() {
            let (cols, vals) = self.b.row(i);
            let yi = uy[i];
            if yi != 0.0 {
                for (&j, &v) in cols.iter().zip(vals) {
                    ox[j] += v * yi;
                }
            }
        }
        self.c.spmv_into(uy, oy);
        for i in 0..self.b.rows() {
            let (cols, vals) = self.b.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * ux[j];
            }
            oy[i] -= acc;
        }
    }

    /// Structural diagnostics. Rank and nullspace figures need dense SVD and
    /// are reported only up to the dense guard.
    pub fn validate(&self) -> Result<SystemDiagnostics> {
        let a_positive_definite = if self.n() <= DENSE_GUARD {
            Some(eigen::is_positive_definite(&self.a)?)
        } else {
            None
        };
        let c_positive_semidefinite = if self.m() <= DENSE_GUARD {
            Some(eigen::is_positive_semidefinite(&self.c)?)
        } else {
            None
        };
        let desk_scale = self.order() <= DENSE_GUARD;
        let (rank_b, null_dim_c_sym, null_intersection_nontrivial) = if desk_scale {
            let bd = self.b.to_dense();
            let rank_b = eigen::rank_with_tol(&bd, 1e-8)?;
            let csym = self.c.symmetric_part()?.to_dense();
            let m = self.m();
            let null_dim = m - eigen::rank_with_tol(&csym, 1e-8)?;
            // v in null(B^T) and null(C) exactly when the stacked [B^T; C]
            // kills it, so compare the stacked rank against m
            let mut stacked = DenseMatrix::zeros(self.n() + m, m);
            let bt = self.b.transpose();
            for (i, j, v) in bt.iter() {
                stacked.set(i, j, v);
            }
            for (i, j, v) in self.c.iter() {
                stacked.set(self.n() + i, j, v);
            }
            let stacked_rank = eigen::rank_with_tol(&stacked, 1e-8)?;
            (Some(rank_b), Some(null_dim), Some(stacked_rank < m))
        } else {
            (None, None, None)
        };
        Ok(SystemDiagnostics {
            n: self.n(),
            m: self.m(),
            a_positive_definite,
            c_positive_semidefinite,
            rank_b,
            null_dim_c_sym,
            null_intersection_nontrivial,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemDiagnostics {
    pub n: usize,
    pub m: usize,
    /// A block PD, when small enough for a dense check
    pub a_positive_definite: Option<bool>,
    /// C block PSD, when small enough for a dense check
    pub c_positive_semidefinite: Option<bool>,
    /// rank(B), when the system is small enough for dense SVD
    pub rank_b: Option<usize>,
    /// dim null(C + C^T)
    pub null_dim_c_sym: Option<usize>,
    /// whether null(B^T) and null(C) share a nonzero vector, which makes the
    /// assembled matrix singular
    pub null_intersection_nontrivial: Option<bool>,
}

/// Vector partitioned to match the two block rows.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl BlockVector {
    pub fn zeros(n: usize, m: usize) -> Self {
        BlockVector { x: vec![0.0; n], y: vec![0.0; m] }
    }

    pub fn split(n: usize, m: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != n + m {
            return Err(Error::dim(format!(
                "cannot split length {} into blocks of {n} and {m}",
                flat.len()
            )));
        }
        Ok(BlockVector { x: flat[..n].to_vec(), y: flat[n..].to_vec() })
    }

    pub fn concat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.x.len() + self.y.len());
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.y);
        out
    }

    pub fn len(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The six matrices of a two-way splitting of the blocks:
/// A = A_P + A_S, B = B_P + B_S, C = C_P + C_S.
#[derive(Debug, Clone)]
pub struct SplittingSet {
    pub a_p: SparseMatrix,
    pub a_s: SparseMatrix,
    pub b_p: SparseMatrix,
    pub b_s: SparseMatrix,
    pub c_p: SparseMatrix,
    pub c_s: SparseMatrix,
}

impl SplittingSet {
    /// Checks the three sum identities against the system blocks.
    pub fn validate_sums(&self, sys: &SaddleSystem, rel_tol: f64) -> Result<()> {
        let checks = [
            ("A", self.a_p.add(&self.a_s)?, sys.a()),
            ("B", self.b_p.add(&self.b_s)?, sys.b()),
            ("C", self.c_p.add(&self.c_s)?, sys.c()),
        ];
        for (name, sum, target) in checks {
            let defect = sum.sub(target)?.max_abs();
            let scale = target.max_abs().max(1.0);
            if defect > rel_tol * scale {
                return Err(Error::Inconsistency {
                    context: format!("splitting sum for block {name}"),
                    defect,
                });
            }
        }
        Ok(())
    }
}

/// Diagonal shift blocks P_alpha (order n) and P_beta (order m), both SPD.
#[derive(Debug, Clone)]
pub struct ShiftPair {
    pub p_alpha: SparseMatrix,
    pub p_beta: SparseMatrix,
}

impl ShiftPair {
    pub fn identity(n: usize, m: usize, alpha: f64, beta: f64) -> Self {
        ShiftPair {
            p_alpha: SparseMatrix::scaled_identity(n, alpha),
            p_beta: SparseMatrix::scaled_identity(m, beta),
        }
    }

    /// The block-diagonal matrix diag(P_alpha, P_beta).
    pub fn sigma(&self) -> SparseMatrix {
        let zero_tr = SparseMatrix::zeros(self.p_alpha.rows(), self.p_beta.cols());
        let zero_bl = SparseMatrix::zeros(self.p_beta.rows(), self.p_alpha.cols());
        SparseMatrix::block_2x2(&self.p_alpha, &zero_tr, &zero_bl, &self.p_beta)
            .expect("shift blocks are square")
    }
}

/// Splits square C into C_P = D + L + U^T and C_S = U - U^T, where D, L, U
/// are the diagonal, strictly lower and strictly upper parts. C_P keeps the
/// full symmetric part of C, so it inherits semidefiniteness, and C_S is
/// exactly skew.
pub fn triangular_splitting(c: &SparseMatrix) -> Result<(SparseMatrix, SparseMatrix)> {
    if !c.is_square() {
        return Err(Error::dim("triangular splitting needs a square matrix".to_string()));
    }
    let m = c.rows();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (i, j, v) in c.iter() {
        if j <= i {
            lower.push((i, j, v));
        } else {
            upper.push((i, j, v));
        }
    }
    let dl = SparseMatrix::from_triplets(m, m, &lower)?;
    let u = SparseMatrix::from_triplets(m, m, &upper)?;
    let ut = u.transpose();
    let c_p = dl.add(&ut)?;
    let c_s = u.sub(&ut)?;
    Ok((c_p, c_s))
}

/// Splits square A into its symmetric and skew parts.
pub fn hermitian_skew_splitting(a: &SparseMatrix) -> Result<(SparseMatrix, SparseMatrix)> {
    Ok((a.symmetric_part()?, a.skew_part()?))
}
