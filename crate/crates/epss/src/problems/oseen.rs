//! Finite-difference Oseen-like cavity problem.
//!
//! The domain is the unit square split into q x q cells. Each velocity
//! component lives on the (q+1) x (q+1) node grid, pressure on the cell
//! grid, giving n = 2(q+1)^2 velocity and m = q^2 pressure unknowns.
//!
//! A applies nu times the five-point Laplacian (zero-Dirichlet ghost rows)
//! plus an edge-averaged centered convection against a fixed divergence-free
//! recirculating wind; the averaging keeps the convection exactly skew
//! symmetric, so the symmetric part of A is nu L and A is positive definite.
//! B is the cell-integrated divergence with boundary-node columns zeroed,
//! which puts both the constant and the checkerboard pressure modes into
//! null(B^T). C is a scaled Neumann-type pressure Laplacian: symmetric
//! positive semidefinite with exactly the constant mode in its nullspace.
//! The constant mode is therefore shared, null(B^T) n null(C) != {0}, and
//! the assembled system is singular.

use crate::error::{Error, Result};
use crate::linalg::{is_positive_definite, SparseMatrix};
use crate::problems::{ProblemKind, ProblemSpec};
use crate::saddle::SaddleSystem;

/// A generated cavity instance plus the knobs that shaped it.
#[derive(Debug, Clone)]
pub struct OseenProblem {
    pub system: SaddleSystem,
    pub q: usize,
    pub h: f64,
    pub viscosity: f64,
    /// Stabilization strength used for C.
    pub gamma: f64,
    /// Diagonal shift added to A in the (unexpected) event the assembled
    /// matrix failed the positive definiteness check; zero when untouched.
    pub delta_shift: f64,
}

fn wind_at(x: f64, y: f64) -> (f64, f64) {
    let xi = 2.0 * x - 1.0;
    let eta = 2.0 * y - 1.0;
    (2.0 * eta * (1.0 - xi * xi), -2.0 * xi * (1.0 - eta * eta))
}

pub fn gen_oseen(spec: &ProblemSpec) -> Result<OseenProblem> {
    if spec.kind != ProblemKind::OseenFd {
        return Err(Error::invalid("spec kind is not oseen-fd"));
    }
    if spec.q < 4 {
        return Err(Error::invalid(format!("grid must have at least 4 cells per side, got {}", spec.q)));
    }
    if !(spec.viscosity > 0.0 && spec.viscosity.is_finite()) {
        return Err(Error::invalid(format!("viscosity must be positive, got {}", spec.viscosity)));
    }
    let q = spec.q;
    let nu = spec.viscosity;
    let h = 1.0 / q as f64;
    let nodes = (q + 1) * (q + 1);
    let n = 2 * nodes;
    let m = q * q;
    let idx = |i: usize, j: usize| j * (q + 1) + i;
    let cell = |ci: usize, cj: usize| cj * q + ci;

    // scalar operator nu L + N on one component's node grid
    let mut scalar = Vec::with_capacity(5 * nodes);
    let inv_h2 = 1.0 / (h * h);
    for j in 0..=q {
        for i in 0..=q {
            let a = idx(i, j);
            scalar.push((a, a, 4.0 * nu * inv_h2));
            let (w1a, w2a) = wind_at(i as f64 * h, j as f64 * h);
            if i < q {
                let b = idx(i + 1, j);
                let (w1b, _) = wind_at((i + 1) as f64 * h, j as f64 * h);
                let conv = (w1a + w1b) / (4.0 * h);
                scalar.push((a, b, -nu * inv_h2 + conv));
                scalar.push((b, a, -nu * inv_h2 - conv));
            }
            if j < q {
                let b = idx(i, j + 1);
                let (_, w2b) = wind_at(i as f64 * h, (j + 1) as f64 * h);
                let conv = (w2a + w2b) / (4.0 * h);
                scalar.push((a, b, -nu * inv_h2 + conv));
                scalar.push((b, a, -nu * inv_h2 - conv));
            }
        }
    }
    // two decoupled components share the scalar operator
    let mut a_triplets = Vec::with_capacity(2 * scalar.len());
    for &(r, c, v) in &scalar {
        a_triplets.push((r, c, v));
        a_triplets.push((r + nodes, c + nodes, v));
    }
    let mut a_mat = SparseMatrix::from_triplets(n, n, &a_triplets)?;

    // cell-integrated divergence; boundary-node columns are zeroed because
    // the cavity prescribes the velocity there
    let interior = |i: usize, j: usize| i > 0 && i < q && j > 0 && j < q;
    let half_h = 0.5 * h;
    let mut b_triplets = Vec::new();
    for cj in 0..q {
        for ci in 0..q {
            let r = cell(ci, cj);
            // u contributes across the vertical faces
            for (i, j, s) in [
                (ci + 1, cj, half_h),
                (ci + 1, cj + 1, half_h),
                (ci, cj, -half_h),
                (ci, cj + 1, -half_h),
            ] {
                if interior(i, j) {
                    b_triplets.push((r, idx(i, j), s));
                }
            }
            // v across the horizontal faces
            for (i, j, s) in [
                (ci, cj + 1, half_h),
                (ci + 1, cj + 1, half_h),
                (ci, cj, -half_h),
                (ci + 1, cj, -half_h),
            ] {
                if interior(i, j) {
                    b_triplets.push((r, nodes + idx(i, j), s));
                }
            }
        }
    }
    let b_mat = SparseMatrix::from_triplets(m, n, &b_triplets)?;

    // pressure stabilization: gamma times the Neumann graph Laplacian on the
    // cell grid, nullspace exactly the constant mode
    let gamma = 0.25 * h * h;
    let mut c_triplets = Vec::new();
    for cj in 0..q {
        for ci in 0..q {
            let r = cell(ci, cj);
            let mut degree = 0.0;
            for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let ni = ci as i64 + di;
                let nj = cj as i64 + dj;
                if ni >= 0 && ni < q as i64 && nj >= 0 && nj < q as i64 {
                    degree += 1.0;
                    c_triplets.push((r, cell(ni as usize, nj as usize), -gamma));
                }
            }
            c_triplets.push((r, r, gamma * degree));
        }
    }
    let c_mat = SparseMatrix::from_triplets(m, m, &c_triplets)?;

    // the construction keeps sym(A) = nu L, which is definite; verify anyway
    // at sizes where the dense check is affordable, and shift visibly if
    // that ever fails
    let mut delta_shift = 0.0;
    if n <= crate::linalg::DENSE_GUARD && !is_positive_definite(&a_mat)? {
        delta_shift = 1e-10 * nu * inv_h2;
        a_mat = a_mat.add(&SparseMatrix::scaled_identity(n, delta_shift))?;
        if !is_positive_definite(&a_mat)? {
            return Err(Error::invalid(
                "assembled velocity operator is not positive definite even after shifting",
            ));
        }
    }

    Ok(OseenProblem {
        system: SaddleSystem::new(a_mat, b_mat, c_mat)?,
        q,
        h,
        viscosity: nu,
        gamma,
        delta_shift,
    })
}
