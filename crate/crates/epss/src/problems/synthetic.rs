//! Seeded random saddle point instances with prescribed rank structure.
//!
//! The generator controls exactly the three properties the certification
//! machinery cares about: A positive definite and nonsymmetric, rank(B), and
//! dim null(C). When both C is singular and B is rank deficient, the rows of
//! B are built inside the orthogonal complement of one null vector of C, so
//! that vector is annihilated by B^T and C simultaneously and the assembled
//! system is guaranteed singular rather than accidentally regular.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SparseMatrix};
use crate::problems::{ProblemKind, ProblemSpec};
use crate::saddle::SaddleSystem;

fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

/// Orthogonal factor of a random square matrix.
fn random_orthogonal(rng: &mut ChaCha8Rng, k: usize) -> DenseMatrix {
    let g = random_dense(rng, k, k);
    let qr = nalgebra::linalg::QR::new(g.to_na());
    DenseMatrix::from_na(&qr.q())
}

/// Columns form an orthonormal basis of the hyperplane orthogonal to y,
/// via the Householder reflector that maps y onto the last coordinate axis.
fn orthonormal_complement(y: &[f64]) -> DenseMatrix {
    let k = y.len();
    let last = y[k - 1];
    let sign = if last >= 0.0 { 1.0 } else { -1.0 };
    // v = y + sign(y_last) e_last never degenerates for unit y
    let mut v = y.to_vec();
    v[k - 1] += sign;
    let vtv: f64 = v.iter().map(|x| x * x).sum();
    // H = I - 2 v v^T / (v^T v); its first k-1 columns are orthonormal and
    // orthogonal to y
    DenseMatrix::from_fn(k, k - 1, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - 2.0 * v[i] * v[j] / vtv
    })
}

pub fn gen_synthetic_singular(spec: &ProblemSpec) -> Result<SaddleSystem> {
    if spec.kind != ProblemKind::SyntheticSingular {
        return Err(Error::invalid("spec kind is not synthetic-singular"));
    }
    let (n, m, rank_b, null_dim) = (spec.n, spec.m, spec.rank_b, spec.null_dim_c);
    if n == 0 || m == 0 {
        return Err(Error::invalid("block sizes must be positive"));
    }
    if m > n {
        return Err(Error::dim(format!("m = {m} must not exceed n = {n}")));
    }
    if rank_b > m {
        return Err(Error::invalid(format!("rank(B) = {rank_b} exceeds m = {m}")));
    }
    if null_dim > m {
        return Err(Error::invalid(format!("null dimension {null_dim} exceeds m = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // A = G^T G / n + I/2 + skew: symmetric part definite by construction
    let g = random_dense(&mut rng, n, n);
    let gram = g.transpose().matmul(&g).scaled(1.0 / n as f64);
    let k_raw = random_dense(&mut rng, n, n);
    let skew = k_raw.skew_part();
    let mut a = gram.add(&skew);
    for i in 0..n {
        a.set(i, i, a.get(i, i) + 0.5);
    }

    // C = V^T diag(d) V with null_dim zeroed entries
    let v = random_orthogonal(&mut rng, m);
    let mut d = vec![0.0; m];
    for entry in d.iter_mut().take(m - null_dim) {
        *entry = rng.gen_range(0.5..1.5);
    }
    let vt_d = DenseMatrix::from_fn(m, m, |i, j| v.get(j, i) * d[j]);
    let c = vt_d.matmul(&v);

    // null vector of C to align B's row space against, when one exists and
    // B is to be rank deficient
    let align: Option<Vec<f64>> = if null_dim >= 1 && rank_b < m {
        // C (V^T e_k) = 0 for any k with d_k = 0; the last row of V is one
        Some((0..m).map(|j| v.get(m - 1, j)).collect())
    } else {
        None
    };

    // B = U_r diag(s) W_r^T with exact rank, U_r orthonormal
    let w = random_orthogonal(&mut rng, n);
    let s: Vec<f64> = (0..rank_b).map(|_| rng.gen_range(0.5..1.5)).collect();
    let u_r = match &align {
        Some(y) => {
            // draw the left factor inside the complement of y
            let basis = orthonormal_complement(y);
            let inner = random_orthogonal(&mut rng, m - 1);
            let mut cols = DenseMatrix::zeros(m - 1, rank_b);
            for i in 0..m - 1 {
                for j in 0..rank_b {
                    cols.set(i, j, inner.get(i, j));
                }
            }
            basis.matmul(&cols)
        }
        None => {
            let full = random_orthogonal(&mut rng, m);
            DenseMatrix::from_fn(m, rank_b, |i, j| full.get(i, j))
        }
    };
    let mut b = DenseMatrix::zeros(m, n);
    for r in 0..rank_b {
        for i in 0..m {
            let ui = u_r.get(i, r) * s[r];
            if ui == 0.0 {
                continue;
            }
            for j in 0..n {
                b.set(i, j, b.get(i, j) + ui * w.get(j, r));
            }
        }
    }

    SaddleSystem::new(
        SparseMatrix::from_dense(&a),
        SparseMatrix::from_dense(&b),
        SparseMatrix::from_dense(&c),
    )
}
