//! The EPSS family of splitting preconditioners.
//!
//! Every member is defined by a splitting of the three system blocks,
//! A = A_P + A_S, B = B_P + B_S, C = C_P + C_S, together with SPD shift
//! blocks P_alpha, P_beta collected in Sigma = diag(P_alpha, P_beta). With
//!
//! ```text
//!   P = [  A_P  B_P^T ]      S = [  A_S  B_S^T ]
//!       [ -B_P  C_P   ]          [ -B_S  C_S   ]
//! ```
//!
//! the induced preconditioner is G = (Sigma + P) Sigma^{-1} (Sigma + S), and
//! one application solves with both shifted factors. The factorized variant
//! keeps B whole in the first factor and solves through an explicit
//! Schur-type matrix instead, which needs one triangular sweep, two LU
//! solves and one more triangular sweep per application.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::krylov::{LinOp, SolveReport, StopReason};
use crate::linalg::sparse_lu::symmetric_pd_probe;
use crate::linalg::vecops::norm2;
use crate::linalg::{LuFactors, SparseMatrix};
use crate::saddle::{
    hermitian_skew_splitting, triangular_splitting, BlockVector, SaddleSystem, ShiftPair,
    SplittingSet,
};

/// Regularizer added to diag(C + C^T) when forming the second shift base, so
/// the base stays SPD when C has empty diagonal entries.
pub const SHIFT_BASE_REGULARIZER: f64 = 1e-4;

/// Named members of the splitting family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Hss,
    Ghss,
    Ehss,
    Pss,
    Gpss,
    Epss,
    Ss,
    Gss,
    Ess,
    Sepss,
}

impl Preset {
    pub fn all() -> [Preset; 10] {
        [
            Preset::Hss,
            Preset::Ghss,
            Preset::Ehss,
            Preset::Pss,
            Preset::Gpss,
            Preset::Epss,
            Preset::Ss,
            Preset::Gss,
            Preset::Ess,
            Preset::Sepss,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Hss => "hss",
            Preset::Ghss => "ghss",
            Preset::Ehss => "ehss",
            Preset::Pss => "pss",
            Preset::Gpss => "gpss",
            Preset::Epss => "epss",
            Preset::Ss => "ss",
            Preset::Gss => "gss",
            Preset::Ess => "ess",
            Preset::Sepss => "sepss",
        }
    }

    pub fn parse(s: &str) -> Result<Preset> {
        Preset::all()
            .into_iter()
            .find(|p| p.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::invalid(format!("unknown preset '{s}'")))
    }

    /// Whether the preset reads the second parameter; the single-parameter
    /// members reuse alpha for both shifts.
    pub fn two_parameter(&self) -> bool {
        !matches!(self, Preset::Hss | Preset::Pss | Preset::Ss)
    }

    /// Whether the shifts scale the diagonal bases rather than the identity.
    pub fn scaled_diagonal_shifts(&self) -> bool {
        matches!(self, Preset::Ehss | Preset::Epss | Preset::Ess | Preset::Sepss)
    }
}

/// Diagonal shift bases built from the system: Q1 = diag(A + A^T) and
/// Q2 = r I + diag(C + C^T) with a small fixed regularizer r.
pub fn shift_bases(sys: &SaddleSystem) -> Result<(SparseMatrix, SparseMatrix)> {
    let a_sym_diag: Vec<f64> = {
        let at = sys.a().transpose();
        (0..sys.n()).map(|i| sys.a().get(i, i) + at.get(i, i)).collect()
    };
    if a_sym_diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::invalid(
            "diag(A + A^T) has a nonpositive entry, first shift base is not SPD",
        ));
    }
    let c_sym_diag: Vec<f64> = {
        let ct = sys.c().transpose();
        (0..sys.m())
            .map(|i| SHIFT_BASE_REGULARIZER + sys.c().get(i, i) + ct.get(i, i))
            .collect()
    };
    if c_sym_diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::invalid(
            "regularized diag(C + C^T) has a nonpositive entry, second shift base is not SPD",
        ));
    }
    Ok((SparseMatrix::from_diag(&a_sym_diag), SparseMatrix::from_diag(&c_sym_diag)))
}

/// Preset provenance of a configuration.
#[derive(Debug, Clone)]
pub struct PresetBuild {
    pub preset: Preset,
    pub alpha: f64,
    pub beta: f64,
    pub q1: SparseMatrix,
    pub q2: SparseMatrix,
}

/// A fully specified member of the family: block splitting plus shifts.
#[derive(Debug, Clone)]
pub struct EpssConfig {
    pub splitting: SplittingSet,
    pub shifts: ShiftPair,
    /// Present when the configuration came from `preset_config`.
    pub built: Option<PresetBuild>,
}

impl EpssConfig {
    pub fn custom(splitting: SplittingSet, shifts: ShiftPair) -> Self {
        EpssConfig { splitting, shifts, built: None }
    }
}

/// Instantiates a named preset on a system. Single-parameter presets ignore
/// `beta` and use `alpha` for both shifts.
pub fn preset_config(
    preset: Preset,
    sys: &SaddleSystem,
    alpha: f64,
    beta: f64,
) -> Result<EpssConfig> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be a positive number, got {alpha}")));
    }
    if preset.two_parameter() && !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("beta must be a positive number, got {beta}")));
    }
    let n = sys.n();
    let m = sys.m();
    let beta_eff = if preset.two_parameter() { beta } else { alpha };

    let zero_a = SparseMatrix::zeros(n, n);
    let zero_b = SparseMatrix::zeros(m, n);
    let zero_c = SparseMatrix::zeros(m, m);

    let splitting = match preset {
        Preset::Hss | Preset::Ghss | Preset::Ehss => {
            let (h, s) = hermitian_skew_splitting(sys.a())?;
            SplittingSet {
                a_p: h,
                a_s: s,
                b_p: zero_b,
                b_s: sys.b().clone(),
                c_p: sys.c().clone(),
                c_s: zero_c,
            }
        }
        Preset::Pss | Preset::Gpss | Preset::Epss => SplittingSet {
            a_p: sys.a().clone(),
            a_s: zero_a,
            b_p: zero_b,
            b_s: sys.b().clone(),
            c_p: sys.c().clone(),
            c_s: zero_c,
        },
        Preset::Ss | Preset::Gss | Preset::Ess => SplittingSet {
            a_p: sys.a().clone(),
            a_s: zero_a,
            b_p: sys.b().clone(),
            b_s: zero_b,
            c_p: sys.c().clone(),
            c_s: zero_c,
        },
        Preset::Sepss => {
            let (c_p, c_s) = triangular_splitting(sys.c())?;
            SplittingSet {
                a_p: sys.a().clone(),
                a_s: zero_a,
                b_p: sys.b().clone(),
                b_s: zero_b,
                c_p,
                c_s,
            }
        }
    };

    let (q1, q2) = if preset.scaled_diagonal_shifts() {
        shift_bases(sys)?
    } else {
        (SparseMatrix::identity(n), SparseMatrix::identity(m))
    };
    let shifts = ShiftPair { p_alpha: q1.scaled(alpha), p_beta: q2.scaled(beta_eff) };

    Ok(EpssConfig {
        splitting,
        shifts,
        built: Some(PresetBuild { preset, alpha, beta: beta_eff, q1, q2 }),
    })
}

/// Options for the factorized build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepssOptions {
    /// Relative threshold under which entries of the Schur-term columns are
    /// discarded while forming N = A + P_alpha + B^T (C_P + P_beta)^{-1} B.
    /// Zero keeps every nonzero entry exactly.
    pub drop_tol: f64,
}

impl Default for SepssOptions {
    fn default() -> Self {
        SepssOptions { drop_tol: 0.0 }
    }
}

enum TriangularSolver {
    /// Forward substitution against a lower triangular matrix.
    Forward(SparseMatrix),
    Factored(LuFactors),
}

impl TriangularSolver {
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match self {
            TriangularSolver::Forward(t) => t.triangular_solve(rhs, true),
            TriangularSolver::Factored(f) => Ok(f.solve(rhs)),
        }
    }
}

enum OperatorKind {
    Generic {
        plus_p: LuFactors,
        plus_s: LuFactors,
        sigma: SparseMatrix,
    },
    Factorized {
        /// C_P + P_beta
        t: TriangularSolver,
        /// A + P_alpha + B^T (C_P + P_beta)^{-1} B
        schur: LuFactors,
        /// C_S + P_beta
        skew_shift: LuFactors,
        b: SparseMatrix,
        p_beta: SparseMatrix,
    },
}

/// A built preconditioner; `apply` computes G^{-1} x.
pub struct EpssOperator {
    n: usize,
    m: usize,
    kind: OperatorKind,
    build_seconds: f64,
}

fn check_skew(name: &str, x: &SparseMatrix) -> Result<()> {
    let defect = x.add(&x.transpose())?.max_abs();
    let scale = x.max_abs().max(1.0);
    if defect > 1e-12 * scale {
        return Err(Error::invalid(format!("{name} is not skew symmetric, defect {defect:.3e}")));
    }
    Ok(())
}

fn check_spd_shift(name: &str, p: &SparseMatrix) -> Result<()> {
    if !p.is_square() {
        return Err(Error::dim(format!("{name} must be square")));
    }
    if p.is_diagonal() {
        let ok = p.rows() == 0 || p.diag_vector().iter().all(|&d| d > 0.0);
        if !ok {
            return Err(Error::invalid(format!("{name} must have positive diagonal entries")));
        }
        return Ok(());
    }
    if !p.is_symmetric(1e-12 * p.max_abs().max(1.0)) {
        return Err(Error::invalid(format!("{name} must be symmetric")));
    }
    if !symmetric_pd_probe(&p.symmetric_part()?) {
        return Err(Error::invalid(format!("{name} must be positive definite")));
    }
    Ok(())
}

fn structural_checks(sys: &SaddleSystem, cfg: &EpssConfig) -> Result<()> {
    cfg.splitting.validate_sums(sys, 1e-12)?;
    check_skew("A_S", &cfg.splitting.a_s)?;
    check_skew("C_S", &cfg.splitting.c_s)?;
    check_spd_shift("P_alpha", &cfg.shifts.p_alpha)?;
    check_spd_shift("P_beta", &cfg.shifts.p_beta)?;
    if cfg.shifts.p_alpha.rows() != sys.n() || cfg.shifts.p_beta.rows() != sys.m() {
        return Err(Error::dim("shift blocks do not match the system sizes".to_string()));
    }
    // definiteness of the splitting blocks, probed through factorization
    let a_p_sym = cfg.splitting.a_p.symmetric_part()?;
    if !symmetric_pd_probe(&a_p_sym) {
        return Err(Error::invalid("A_P must be positive definite"));
    }
    let c_p_sym = cfg.splitting.c_p.symmetric_part()?;
    let scale = c_p_sym.max_abs();
    if scale > 0.0 {
        let shifted = c_p_sym.add(&SparseMatrix::scaled_identity(sys.m(), 1e-10 * scale))?;
        if !symmetric_pd_probe(&shifted) {
            return Err(Error::invalid("C_P must be positive semidefinite"));
        }
    }
    Ok(())
}

/// Builds the two-factor operator for an arbitrary family member.
pub fn build_generic(sys: &SaddleSystem, cfg: &EpssConfig) -> Result<EpssOperator> {
    let start = Instant::now();
    structural_checks(sys, cfg)?;
    let sp = &cfg.splitting;
    let sh = &cfg.shifts;

    let plus_p_mat = SparseMatrix::block_2x2(
        &sp.a_p.add(&sh.p_alpha)?,
        &sp.b_p.transpose(),
        &sp.b_p.scaled(-1.0),
        &sp.c_p.add(&sh.p_beta)?,
    )?;
    let plus_s_mat = SparseMatrix::block_2x2(
        &sp.a_s.add(&sh.p_alpha)?,
        &sp.b_s.transpose(),
        &sp.b_s.scaled(-1.0),
        &sp.c_s.add(&sh.p_beta)?,
    )?;
    let plus_p = LuFactors::auto(&plus_p_mat).map_err(|e| wrap_factor("Sigma + P", e))?;
    let plus_s = LuFactors::auto(&plus_s_mat).map_err(|e| wrap_factor("Sigma + S", e))?;
    Ok(EpssOperator {
        n: sys.n(),
        m: sys.m(),
        kind: OperatorKind::Generic { plus_p, plus_s, sigma: sh.sigma() },
        build_seconds: start.elapsed().as_secs_f64(),
    })
}

fn wrap_factor(system: &str, e: Error) -> Error {
    match e {
        Error::Singular { pivot } => Error::Factorization { system: system.to_string(), pivot },
        other => other,
    }
}

/// Builds the factorized operator with P_alpha = alpha Q1, P_beta = beta Q2
/// and the triangular splitting of C.
pub fn build_sepss(
    sys: &SaddleSystem,
    alpha: f64,
    q1: &SparseMatrix,
    beta: f64,
    q2: &SparseMatrix,
) -> Result<EpssOperator> {
    build_sepss_with(sys, alpha, q1, beta, q2, SepssOptions::default())
}

pub fn build_sepss_with(
    sys: &SaddleSystem,
    alpha: f64,
    q1: &SparseMatrix,
    beta: f64,
    q2: &SparseMatrix,
    opts: SepssOptions,
) -> Result<EpssOperator> {
    let start = Instant::now();
    if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!(
            "shift scales must be positive numbers, got alpha {alpha}, beta {beta}"
        )));
    }
    if q1.rows() != sys.n() || q2.rows() != sys.m() {
        return Err(Error::dim("shift bases do not match the system sizes".to_string()));
    }
    check_spd_shift("Q1", q1)?;
    check_spd_shift("Q2", q2)?;
    if !(opts.drop_tol >= 0.0) {
        return Err(Error::invalid("drop tolerance must be nonnegative"));
    }

    let n = sys.n();
    let m = sys.m();
    let p_alpha = q1.scaled(alpha);
    let p_beta = q2.scaled(beta);
    let (c_p, c_s) = triangular_splitting(sys.c())?;

    let t_mat = c_p.add(&p_beta)?;
    let t = if p_beta.is_diagonal() {
        // C_P is lower triangular, so the sum solves by forward substitution
        TriangularSolver::Forward(t_mat.clone())
    } else {
        TriangularSolver::Factored(
            LuFactors::auto(&t_mat).map_err(|e| wrap_factor("C_P + P_beta", e))?,
        )
    };
    // structural zero diagonal would poison the forward sweeps
    for i in 0..m {
        if t_mat.get(i, i) == 0.0 {
            return Err(Error::Factorization { system: "C_P + P_beta".to_string(), pivot: i });
        }
    }

    // N = A + P_alpha + B^T (C_P + P_beta)^{-1} B, formed column by column
    let b = sys.b().clone();
    let bt = b.transpose();
    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    let mut col_idx: Vec<usize> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut rhs = vec![0.0f64; m];
    for j in 0..n {
        let (bcols, bvals) = bt.row(j);
        if bcols.is_empty() {
            row_ptr.push(col_idx.len());
            continue;
        }
        rhs.iter_mut().for_each(|v| *v = 0.0);
        for (&k, &v) in bcols.iter().zip(bvals) {
            rhs[k] = v;
        }
        let w = t.solve(&rhs)?;
        let u = b.spmv_transpose(&w)?;
        let cutoff = if opts.drop_tol > 0.0 {
            opts.drop_tol * u.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
        } else {
            0.0
        };
        for (i, &v) in u.iter().enumerate() {
            if v != 0.0 && v.abs() > cutoff {
                col_idx.push(i);
                values.push(v);
            }
        }
        row_ptr.push(col_idx.len());
    }
    // rows built above are the columns of the Schur term
    let schur_term_t = SparseMatrix::from_csr_parts(n, n, row_ptr, col_idx, values);
    let schur_mat = sys.a().add(&p_alpha)?.add(&schur_term_t.transpose())?;
    let schur = LuFactors::auto(&schur_mat).map_err(|e| wrap_factor("N", e))?;

    let skew_shift_mat = c_s.add(&p_beta)?;
    let skew_shift =
        LuFactors::auto(&skew_shift_mat).map_err(|e| wrap_factor("C_S + P_beta", e))?;

    Ok(EpssOperator {
        n,
        m,
        kind: OperatorKind::Factorized { t, schur, skew_shift, b, p_beta },
        build_seconds: start.elapsed().as_secs_f64(),
    })
}

impl EpssOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.n + self.m
    }

    pub fn build_seconds(&self) -> f64 {
        self.build_seconds
    }

    pub fn is_factorized(&self) -> bool {
        matches!(self.kind, OperatorKind::Factorized { .. })
    }

    /// G^{-1} applied to a block vector.
    pub fn apply(&self, x: &BlockVector) -> Result<BlockVector> {
        if x.x.len() != self.n || x.y.len() != self.m {
            return Err(Error::dim(format!(
                "operator is ({}, {}), vector is ({}, {})",
                self.n,
                self.m,
                x.x.len(),
                x.y.len()
            )));
        }
        match &self.kind {
            OperatorKind::Generic { plus_p, plus_s, sigma } => {
                let flat = x.concat();
                let r1 = plus_p.solve(&flat);
                let r2 = sigma.spmv(&r1)?;
                let r3 = plus_s.solve(&r2);
                BlockVector::split(self.n, self.m, &r3)
            }
            OperatorKind::Factorized { t, schur, skew_shift, b, p_beta } => {
                // five-step solve through the block factorization
                let s2 = t.solve(&x.y)?;
                let bts2 = b.spmv_transpose(&s2)?;
                let s1: Vec<f64> = x.x.iter().zip(&bts2).map(|(a, c)| a - c).collect();
                let y1 = schur.solve(&s1);
                let mut by1 = b.spmv(&y1)?;
                for (v, g) in by1.iter_mut().zip(&x.y) {
                    *v += g;
                }
                let z2 = t.solve(&by1)?;
                let pz = p_beta.spmv(&z2)?;
                let y2 = skew_shift.solve(&pz);
                Ok(BlockVector { x: y1, y: y2 })
            }
        }
    }

    /// Flat-layout apply used by the Krylov drivers.
    pub fn apply_flat(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let v = BlockVector::split(self.n, self.m, x)?;
        let r = self.apply(&v)?;
        out.copy_from_slice(&r.concat());
        Ok(())
    }
}

impl LinOp for EpssOperator {
    fn size(&self) -> usize {
        self.order()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.apply_flat(x, y).expect("operator and vector sizes agree");
    }
}

impl LinOp for SaddleSystem {
    fn size(&self) -> usize {
        self.order()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.apply_flat(x, y);
    }
}

/// The affine iteration map u -> u + 2 G^{-1}(b - K u) behind the two
/// half-step scheme; its linear part I - 2 G^{-1} K drives convergence.
pub struct IterationOperator<'a> {
    sys: &'a SaddleSystem,
    op: &'a EpssOperator,
}

pub fn iteration_operator<'a>(
    sys: &'a SaddleSystem,
    op: &'a EpssOperator,
) -> Result<IterationOperator<'a>> {
    if sys.n() != op.n() || sys.m() != op.m() {
        return Err(Error::dim("operator was built for a different system".to_string()));
    }
    Ok(IterationOperator { sys, op })
}

impl LinOp for IterationOperator<'_> {
    fn size(&self) -> usize {
        self.sys.order()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let mut kx = vec![0.0; x.len()];
        self.sys.apply_flat(x, &mut kx);
        self.op.apply_flat(&kx, y).expect("sizes agree");
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = xi - 2.0 * *yi;
        }
    }
}

/// Runs the stationary two half-step iteration itself, without a Krylov
/// wrapper. Non-convergence is reported, not an error.
pub fn stationary_solve(
    sys: &SaddleSystem,
    op: &EpssOperator,
    b: &[f64],
    u0: &[f64],
    rel_tol: f64,
    max_iters: usize,
) -> Result<(Vec<f64>, SolveReport)> {
    if sys.n() != op.n() || sys.m() != op.m() {
        return Err(Error::dim("operator was built for a different system".to_string()));
    }
    let order = sys.order();
    if b.len() != order || u0.len() != order {
        return Err(Error::dim("vector lengths do not match the system order".to_string()));
    }
    let start = Instant::now();
    let bnorm = norm2(b);
    let denom = if bnorm > 0.0 { bnorm } else { 1.0 };
    let mut u = u0.to_vec();
    let mut ku = vec![0.0; order];
    let mut corr = vec![0.0; order];
    let mut history = Vec::with_capacity(max_iters + 1);
    let mut iterations = 0;
    let stop = loop {
        sys.apply_flat(&u, &mut ku);
        let r: Vec<f64> = b.iter().zip(&ku).map(|(bi, ki)| bi - ki).collect();
        let rel = norm2(&r) / denom;
        history.push(rel);
        if rel <= rel_tol {
            break StopReason::Tolerance;
        }
        if iterations >= max_iters {
            break StopReason::MaxIterations;
        }
        if !rel.is_finite() {
            break StopReason::Breakdown;
        }
        op.apply_flat(&r, &mut corr)?;
        for (ui, ci) in u.iter_mut().zip(&corr) {
            *ui += 2.0 * ci;
        }
        iterations += 1;
    };
    let final_rel = *history.last().expect("at least one residual recorded");
    Ok((
        u,
        SolveReport {
            iterations,
            converged: stop == StopReason::Tolerance,
            stop,
            final_relative_residual: final_rel,
            residual_history: history,
            restart_residuals: Vec::new(),
            error_relative: None,
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    ))
}

/// First parameter estimate: with A_a = A + alpha Q1 and the triangular
/// splitting C = C_P + C_S,
///
/// ```text
///   beta = sqrt( ||(B A_a^{-1} B^T + C_P) Q2^{-1} C_S||_F / ||Q2||_F )
/// ```
///
/// Returns 0 when C_S vanishes, in which case the estimate is degenerate and
/// the caller should pick beta by sweep instead.
pub fn beta_star(
    sys: &SaddleSystem,
    alpha: f64,
    q1: &SparseMatrix,
    q2: &SparseMatrix,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be a positive number, got {alpha}")));
    }
    if q1.rows() != sys.n() || q2.rows() != sys.m() {
        return Err(Error::dim("shift bases do not match the system sizes".to_string()));
    }
    let (c_p, c_s) = triangular_splitting(sys.c())?;
    if c_s.nnz() == 0 {
        return Ok(0.0);
    }
    let a_shifted = sys.a().add(&q1.scaled(alpha))?;
    let a_lu = LuFactors::auto(&a_shifted).map_err(|e| wrap_factor("A + alpha Q1", e))?;
    let q2_diag_inv: Option<Vec<f64>> = if q2.is_diagonal() {
        Some(q2.diag_vector().iter().map(|d| 1.0 / d).collect())
    } else {
        None
    };
    let q2_lu = if q2_diag_inv.is_none() {
        Some(LuFactors::auto(q2).map_err(|e| wrap_factor("Q2", e))?)
    } else {
        None
    };

    let cs_t = c_s.transpose();
    let mut num_sq = 0.0f64;
    let mut col = vec![0.0f64; sys.m()];
    for j in 0..sys.m() {
        let (rows, vals) = cs_t.row(j);
        if rows.is_empty() {
            continue;
        }
        col.iter_mut().for_each(|v| *v = 0.0);
        for (&i, &v) in rows.iter().zip(vals) {
            col[i] = v;
        }
        let v = match (&q2_diag_inv, &q2_lu) {
            (Some(dinv), _) => col.iter().zip(dinv).map(|(c, d)| c * d).collect::<Vec<f64>>(),
            (None, Some(lu)) => lu.solve(&col),
            _ => unreachable!(),
        };
        let z = sys.b().spmv_transpose(&v)?;
        let t = a_lu.solve(&z);
        let mut w = sys.b().spmv(&t)?;
        c_p.spmv_add_into(&v, &mut w);
        num_sq += w.iter().map(|x| x * x).sum::<f64>();
    }
    Ok((num_sq.sqrt().sqrt() / q2.frobenius_norm().sqrt()).max(0.0))
}

/// Radicand of the second parameter estimate,
/// -trace((B B^T + C_P^T C_P) Q2^{-1} C_S^2 Q2^{-1}) / trace(Q2^2), which is
/// nonnegative in exact arithmetic because C_S^2 is symmetric negative
/// semidefinite.
pub fn beta_double_star_radicand(sys: &SaddleSystem, q2: &SparseMatrix) -> Result<f64> {
    if q2.rows() != sys.m() || !q2.is_square() {
        return Err(Error::dim("Q2 does not match the system size".to_string()));
    }
    let (c_p, c_s) = triangular_splitting(sys.c())?;
    if c_s.nnz() == 0 {
        return Ok(0.0);
    }
    let z = sys
        .b()
        .matmul(&sys.b().transpose())?
        .add(&c_p.transpose().matmul(&c_p)?)?;
    // With F = Q2^{-1} C_S and C_S skew, Q2^{-1} C_S^2 Q2^{-1} = -F F^T, so
    // the numerator trace is the sum of f_j^T Z f_j over the columns of F.
    let q2_diag_inv: Option<Vec<f64>> = if q2.is_diagonal() {
        Some(q2.diag_vector().iter().map(|d| 1.0 / d).collect())
    } else {
        None
    };
    let q2_lu = if q2_diag_inv.is_none() {
        Some(LuFactors::auto(q2).map_err(|e| wrap_factor("Q2", e))?)
    } else {
        None
    };
    let cs_t = c_s.transpose();
    let mut numerator = 0.0f64;
    for j in 0..sys.m() {
        let (rows, _) = cs_t.row(j);
        if rows.is_empty() {
            continue;
        }
        let col = cs_t.row_dense(j);
        let f = match (&q2_diag_inv, &q2_lu) {
            (Some(dinv), _) => col.iter().zip(dinv).map(|(c, d)| c * d).collect::<Vec<f64>>(),
            (None, Some(lu)) => lu.solve(&col),
            _ => unreachable!(),
        };
        let zf = z.spmv(&f)?;
        numerator += f.iter().zip(&zf).map(|(a, b)| a * b).sum::<f64>();
    }
    let denominator = q2.trace_of_product(q2)?;
    Ok(numerator / denominator)
}

/// Second parameter estimate: the fourth root of the radicand, clamped at
/// zero against roundoff. Returns 0 when C_S vanishes.
pub fn beta_double_star(sys: &SaddleSystem, q2: &SparseMatrix) -> Result<f64> {
    let radicand = beta_double_star_radicand(sys, q2)?;
    Ok(radicand.max(0.0).sqrt().sqrt())
}
