//! Restarted GMRES and FGMRES with right preconditioning.
//!
//! Inner iterations track the least-squares residual estimate; the true
//! residual is recomputed at every restart boundary and governs both
//! convergence and the reported final residual.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::vecops::{all_finite, axpy, dot, norm2, sub};

/// Square linear operator applied to flat vectors.
pub trait LinOp {
    fn size(&self) -> usize;
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

impl LinOp for crate::linalg::SparseMatrix {
    fn size(&self) -> usize {
        assert!(self.is_square());
        self.rows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y);
    }
}

/// Preconditioner allowed to differ from one inner step to the next; only
/// FGMRES stays consistent under that freedom.
pub trait FlexPrecond {
    fn size(&self) -> usize;
    fn apply_step(&mut self, step: usize, r: &[f64], z: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Arnoldi cycle length.
    pub restart: usize,
    /// Convergence threshold on the true residual relative to the right hand
    /// side norm (absolute when the right hand side is zero).
    pub rel_tol: f64,
    /// Cap on total inner steps across all cycles.
    pub max_iters: usize,
    /// Wall clock budget, checked at restart boundaries.
    pub max_time_s: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { restart: 20, rel_tol: 1e-9, max_iters: 1000, max_time_s: 1000.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    MaxIterations,
    MaxTime,
    /// The Arnoldi process produced a non-finite quantity or an unsolvable
    /// projected system.
    Breakdown,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Total inner Arnoldi steps taken.
    pub iterations: usize,
    pub converged: bool,
    pub stop: StopReason,
    /// True relative residual at exit.
    pub final_relative_residual: f64,
    /// Initial true relative residual followed by one least-squares estimate
    /// per inner step.
    pub residual_history: Vec<f64>,
    /// (iteration count, true relative residual) recorded at every restart
    /// boundary, including entry and exit.
    pub restart_residuals: Vec<(usize, f64)>,
    /// Relative error against a reference solution, filled by callers that
    /// know one.
    pub error_relative: Option<f64>,
    pub wall_seconds: f64,
}

enum Pc<'a> {
    None,
    Fixed(&'a dyn LinOp),
    Flexible(&'a mut dyn FlexPrecond),
}

impl Pc<'_> {
    fn apply(&mut self, step: usize, r: &[f64], z: &mut [f64]) {
        match self {
            Pc::None => z.copy_from_slice(r),
            Pc::Fixed(op) => op.apply_into(r, z),
            Pc::Flexible(fp) => fp.apply_step(step, r, z),
        }
    }

    fn is_flexible(&self) -> bool {
        matches!(self, Pc::Flexible(_))
    }
}

/// Right-preconditioned restarted GMRES. Pass `None` for plain GMRES.
pub fn gmres(
    a: &dyn LinOp,
    precond: Option<&dyn LinOp>,
    b: &[f64],
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let pc = match precond {
        Some(p) => {
            if p.size() != a.size() {
                return Err(Error::dim(format!(
                    "preconditioner order {} does not match operator order {}",
                    p.size(),
                    a.size()
                )));
            }
            Pc::Fixed(p)
        }
        None => Pc::None,
    };
    driver(a, pc, b, x0, opts)
}

/// Flexible restarted GMRES; the preconditioner may vary per step.
pub fn fgmres(
    a: &dyn LinOp,
    precond: &mut dyn FlexPrecond,
    b: &[f64],
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    if precond.size() != a.size() {
        return Err(Error::dim(format!(
            "preconditioner order {} does not match operator order {}",
            precond.size(),
            a.size()
        )));
    }
    driver(a, Pc::Flexible(precond), b, x0, opts)
}

fn driver(
    a: &dyn LinOp,
    mut pc: Pc,
    b: &[f64],
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = a.size();
    if b.len() != n || x0.len() != n {
        return Err(Error::dim(format!(
            "operator order {n} against rhs length {} and guess length {}",
            b.len(),
            x0.len()
        )));
    }
    if opts.restart == 0 {
        return Err(Error::invalid("restart length must be at least 1"));
    }
    if !(opts.rel_tol >= 0.0) {
        return Err(Error::invalid("relative tolerance must be nonnegative"));
    }

    let start = Instant::now();
    let mut x = x0.to_vec();
    let bnorm = norm2(b);
    let denom = if bnorm > 0.0 { bnorm } else { 1.0 };

    let mut ax = vec![0.0; n];
    a.apply_into(&x, &mut ax);
    let mut r = sub(b, &ax);
    let mut rnorm = norm2(&r);

    let mut history = vec![rnorm / denom];
    let mut restart_marks = vec![(0usize, rnorm / denom)];
    let mut total = 0usize;

    let stop = 'outer: loop {
        if rnorm / denom <= opts.rel_tol {
            break StopReason::Tolerance;
        }
        if total >= opts.max_iters {
            break StopReason::MaxIterations;
        }
        if start.elapsed().as_secs_f64() > opts.max_time_s {
            break StopReason::MaxTime;
        }
        if !rnorm.is_finite() || !all_finite(&r) {
            break StopReason::Breakdown;
        }

        // one Arnoldi cycle
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|t| t / rnorm).collect()];
        let mut z_store: Vec<Vec<f64>> = Vec::new();
        let mut h_cols: Vec<Vec<f64>> = Vec::new();
        let mut rotations: Vec<(f64, f64)> = Vec::new();
        let mut g = vec![0.0; opts.restart + 1];
        g[0] = rnorm;
        let mut happy_scale = 0.0;
        let mut inner = 0usize;
        let mut broke_down = false;

        for j in 0..opts.restart {
            let mut z = vec![0.0; n];
            pc.apply(total, &basis[j], &mut z);
            let mut w = vec![0.0; n];
            a.apply_into(&z, &mut w);
            if pc.is_flexible() {
                z_store.push(z);
            }

            let w_before = norm2(&w);
            if j == 0 {
                happy_scale = w_before;
            }
            let mut hcol = vec![0.0; j + 2];
            for i in 0..=j {
                let hij = dot(&w, &basis[i]);
                axpy(-hij, &basis[i], &mut w);
                hcol[i] = hij;
            }
            // second orthogonalization pass after heavy cancellation
            if norm2(&w) < w_before / std::f64::consts::SQRT_2 {
                for i in 0..=j {
                    let corr = dot(&w, &basis[i]);
                    axpy(-corr, &basis[i], &mut w);
                    hcol[i] += corr;
                }
            }
            let hh = norm2(&w);
            hcol[j + 1] = hh;
            if !hh.is_finite() || !all_finite(&hcol) {
                broke_down = true;
                break;
            }
            let happy = hh <= 1e-14 * happy_scale;

            // previously accumulated rotations, then a new one zeroing hcol[j+1]
            for (i, &(c, s)) in rotations.iter().enumerate() {
                let t = c * hcol[i] + s * hcol[i + 1];
                hcol[i + 1] = -s * hcol[i] + c * hcol[i + 1];
                hcol[i] = t;
            }
            let (c, s) = {
                let (p, q) = (hcol[j], hcol[j + 1]);
                let rr = p.hypot(q);
                if rr == 0.0 {
                    (1.0, 0.0)
                } else {
                    (p / rr, q / rr)
                }
            };
            hcol[j] = c * hcol[j] + s * hcol[j + 1];
            hcol[j + 1] = 0.0;
            rotations.push((c, s));
            g[j + 1] = -s * g[j];
            g[j] *= c;

            h_cols.push(hcol);
            total += 1;
            inner = j + 1;
            let estimate = g[j + 1].abs() / denom;
            history.push(estimate);

            if happy || estimate <= opts.rel_tol || total >= opts.max_iters {
                break;
            }
            basis.push(w.iter().map(|t| t / hh).collect());
        }

        // least squares solve and solution update
        if inner > 0 {
            let mut y = vec![0.0; inner];
            let mut solvable = true;
            for j in (0..inner).rev() {
                let mut acc = g[j];
                for k in (j + 1)..inner {
                    acc -= h_cols[k][j] * y[k];
                }
                let diag = h_cols[j][j];
                if diag == 0.0 {
                    solvable = false;
                    break;
                }
                y[j] = acc / diag;
            }
            if solvable {
                if pc.is_flexible() {
                    for (yk, zk) in y.iter().zip(&z_store) {
                        axpy(*yk, zk, &mut x);
                    }
                } else {
                    let mut u = vec![0.0; n];
                    for (yk, vk) in y.iter().zip(&basis) {
                        axpy(*yk, vk, &mut u);
                    }
                    let mut z = vec![0.0; n];
                    pc.apply(total, &u, &mut z);
                    axpy(1.0, &z, &mut x);
                }
            } else {
                broke_down = true;
            }
        }

        a.apply_into(&x, &mut ax);
        r = sub(b, &ax);
        rnorm = norm2(&r);
        restart_marks.push((total, rnorm / denom));

        if broke_down {
            break 'outer StopReason::Breakdown;
        }
    };

    let final_rel = rnorm / denom;
    let converged = final_rel <= opts.rel_tol && final_rel.is_finite();
    if restart_marks.last().map(|&(it, _)| it) != Some(total) {
        restart_marks.push((total, final_rel));
    }
    Ok((
        x,
        SolveReport {
            iterations: total,
            converged,
            stop,
            final_relative_residual: final_rel,
            residual_history: history,
            restart_residuals: restart_marks,
            error_relative: None,
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    ))
}

/// Consistency check for (possibly singular) systems: does `u` reproduce the
/// right hand side to the given relative tolerance.
pub fn singular_solve_check(a: &dyn LinOp, u: &[f64], b: &[f64], rel_tol: f64) -> Result<bool> {
    if u.len() != a.size() || b.len() != a.size() {
        return Err(Error::dim("singular_solve_check: length mismatch".to_string()));
    }
    let mut au = vec![0.0; a.size()];
    a.apply_into(u, &mut au);
    let bnorm = norm2(b);
    let denom = if bnorm > 0.0 { bnorm } else { 1.0 };
    Ok(norm2(&sub(b, &au)) / denom <= rel_tol)
}
