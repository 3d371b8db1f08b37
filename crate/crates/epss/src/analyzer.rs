//! Dense certification of semi-convergence for the stationary iteration.
//!
//! The stationary scheme converges from every starting vector, even on a
//! singular system, exactly when its iteration matrix Gamma has
//!
//!   1. pseudo-spectral radius nu(Gamma) = max { |lambda| : lambda != 1 } < 1
//!   2. index one at the eigenvalue 1, i.e. rank(I - Gamma) = rank((I - Gamma)^2)
//!
//! Everything here works on explicit dense matrices and is guarded to desk
//! scale; the point is trustworthy verdicts on instances small enough to
//! inspect, not speed.

use crate::error::{Error, Result};
use crate::linalg::eigen::{dense_eigenvalues, nullspace, rank_with_tol, ComplexSpectrum};
use crate::linalg::{is_positive_definite, DenseLu, DenseMatrix, SparseMatrix, DENSE_GUARD};
use crate::precond::EpssConfig;
use crate::saddle::SaddleSystem;

/// Default tolerance for classifying an eigenvalue as the unit eigenvalue,
/// |lambda - 1| <= tol.
pub const UNIT_TOL: f64 = 1e-8;
/// Default relative singular-value cutoff for the rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Builds the dense iteration matrix Gamma for a configured splitting on a
/// system, by the four-factor product
///
/// ```text
///   Gamma = (Sigma + S)^{-1} (Sigma - P) (Sigma + P)^{-1} (Sigma - S)
/// ```
///
/// and cross-checks it against the equivalent form I - 2 G^{-1} K before
/// returning. A disagreement means the splitting handed in does not satisfy
/// the family's algebra and is reported as an inconsistency.
pub fn iteration_matrix_dense(sys: &SaddleSystem, cfg: &EpssConfig) -> Result<DenseMatrix> {
    let order = sys.order();
    if order > DENSE_GUARD {
        return Err(Error::invalid(format!(
            "order {order} exceeds the dense guard {DENSE_GUARD}"
        )));
    }
    cfg.splitting.validate_sums(sys, 1e-12)?;

    let sp = &cfg.splitting;
    let sh = &cfg.shifts;
    let p_mat = SparseMatrix::block_2x2(
        &sp.a_p,
        &sp.b_p.transpose(),
        &sp.b_p.scaled(-1.0),
        &sp.c_p,
    )?
    .to_dense();
    let s_mat = SparseMatrix::block_2x2(
        &sp.a_s,
        &sp.b_s.transpose(),
        &sp.b_s.scaled(-1.0),
        &sp.c_s,
    )?
    .to_dense();
    let sigma = sh.sigma().to_dense();

    let plus_p = sigma.add(&p_mat);
    let minus_p = sigma.sub(&p_mat);
    let plus_s = sigma.add(&s_mat);
    let minus_s = sigma.sub(&s_mat);

    let lu_p = DenseLu::factor(&plus_p)
        .map_err(|_| Error::invalid("Sigma + P is singular; shifts do not regularize P"))?;
    let lu_s = DenseLu::factor(&plus_s)
        .map_err(|_| Error::invalid("Sigma + S is singular; shifts do not regularize S"))?;

    let gamma = lu_s.solve_matrix(&minus_p.matmul(&lu_p.solve_matrix(&minus_s)));

    // independent route: Gamma = I - 2 (Sigma + S)^{-1} Sigma (Sigma + P)^{-1} K
    let k = sys.assemble_full().to_dense();
    let y = lu_s.solve_matrix(&sigma.matmul(&lu_p.solve_matrix(&k)));
    let cross = DenseMatrix::identity(order).sub(&y.scaled(2.0));

    let defect = gamma.sub(&cross).max_abs();
    let scale = gamma.frobenius_norm().max(1.0);
    if defect > 1e-10 * scale {
        return Err(Error::Inconsistency {
            context: "iteration matrix cross-check".to_string(),
            defect,
        });
    }
    Ok(gamma)
}

/// Spectral facts about an iteration matrix and the semi-convergence verdict
/// they imply.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub spectrum: ComplexSpectrum,
    /// max |lambda|
    pub rho: f64,
    /// max |lambda| over eigenvalues away from 1
    pub nu: f64,
    pub has_unit_eigenvalue: bool,
    pub near_one_count: usize,
    pub rank_first: usize,
    pub rank_second: usize,
    pub index_one: bool,
    pub semi_convergent: bool,
    /// Orthonormal columns spanning the numerical nullspace of I - Gamma;
    /// these are the stationary directions of the iteration.
    pub unit_eigenvector_basis: DenseMatrix,
    pub unit_tol: f64,
    pub rank_tol: f64,
}

/// Certifies a precomputed iteration matrix.
pub fn certify_gamma(gamma: &DenseMatrix, unit_tol: f64, rank_tol: f64) -> Result<SpectralReport> {
    if !gamma.is_square() {
        return Err(Error::dim("iteration matrix must be square".to_string()));
    }
    let spectrum = dense_eigenvalues(gamma)?;
    let rho = spectrum.spectral_radius();
    let nu = spectrum.radius_excluding_unit(unit_tol);
    let near_one_count = spectrum.count_near_one(unit_tol);
    let has_unit_eigenvalue = near_one_count > 0;

    let i_minus = DenseMatrix::identity(gamma.rows()).sub(gamma);
    let squared = i_minus.matmul(&i_minus);
    let rank_first = rank_with_tol(&i_minus, rank_tol)?;
    let rank_second = rank_with_tol(&squared, rank_tol)?;
    let index_one = rank_first == rank_second;
    let unit_eigenvector_basis = nullspace(&i_minus, rank_tol)?;

    Ok(SpectralReport {
        spectrum,
        rho,
        nu,
        has_unit_eigenvalue,
        near_one_count,
        rank_first,
        rank_second,
        index_one,
        semi_convergent: index_one && nu < 1.0,
        unit_eigenvector_basis,
        unit_tol,
        rank_tol,
    })
}

/// Builds Gamma for the configuration and certifies it.
pub fn certify(
    sys: &SaddleSystem,
    cfg: &EpssConfig,
    unit_tol: f64,
    rank_tol: f64,
) -> Result<SpectralReport> {
    let gamma = iteration_matrix_dense(sys, cfg)?;
    certify_gamma(&gamma, unit_tol, rank_tol)
}

/// Sufficient-condition audit over the nullspace of C + C^T.
///
/// Semi-convergence is guaranteed when that nullspace is contained in
/// null(C) and, for every unit null vector r, any one of:
///
///   1. r^T (P_beta + C_S P_beta^{-1} C_S^T) r != r^T (B_S P_alpha^{-1} B_P^T) r
///   2. the right-hand quadratic form vanishes
///   3. r lies in null(B_S^T) or null(B_P^T)
///   4. globally, C is positive definite, or B_S = 0, or B_P = 0
#[derive(Debug, Clone)]
pub struct SufficientConditionReport {
    /// Orthonormal basis of null(C + C^T), columns.
    pub null_basis: DenseMatrix,
    /// null(C + C^T) is contained in null(C).
    pub subset_ok: bool,
    /// (left form, right form) per basis vector.
    pub quadratic_forms: Vec<(f64, f64)>,
    pub condition1: bool,
    pub condition2: bool,
    pub condition3: bool,
    pub condition4: bool,
    /// subset_ok and at least one of the four conditions.
    pub satisfied: bool,
}

fn quadratic_form_tools(
    cfg: &EpssConfig,
) -> Result<(crate::linalg::LuFactors, crate::linalg::LuFactors)> {
    let p_alpha_lu = crate::linalg::LuFactors::auto(&cfg.shifts.p_alpha)
        .map_err(|_| Error::invalid("P_alpha must be invertible"))?;
    let p_beta_lu = crate::linalg::LuFactors::auto(&cfg.shifts.p_beta)
        .map_err(|_| Error::invalid("P_beta must be invertible"))?;
    Ok((p_alpha_lu, p_beta_lu))
}

pub fn sufficient_condition_check(sys: &SaddleSystem, cfg: &EpssConfig) -> Result<SufficientConditionReport> {
    if sys.m() > DENSE_GUARD {
        return Err(Error::invalid(format!(
            "C block order {} exceeds the dense guard {DENSE_GUARD}",
            sys.m()
        )));
    }
    cfg.splitting.validate_sums(sys, 1e-12)?;
    let sp = &cfg.splitting;

    let c_sym = sys.c().symmetric_part()?.scaled(2.0); // C + C^T
    let null_basis = nullspace(&c_sym.to_dense(), 1e-10)?;
    let c_scale = sys.c().frobenius_norm().max(1.0);

    let (p_alpha_lu, p_beta_lu) = quadratic_form_tools(cfg)?;
    let cs_t = sp.c_s.transpose();
    let bs_t = sp.b_s.transpose();
    let bp_t = sp.b_p.transpose();
    let b_scale = sys.b().frobenius_norm().max(1.0);

    let mut subset_ok = true;
    let mut quadratic_forms = Vec::new();
    let mut cond1 = true;
    let mut cond2 = true;
    let mut cond3 = true;
    for jc in 0..null_basis.cols() {
        let r = null_basis.column(jc);
        let cr = sys.c().spmv(&r)?;
        if crate::linalg::vecops::norm2(&cr) > 1e-10 * c_scale {
            subset_ok = false;
        }

        let pbr = cfg.shifts.p_beta.spmv(&r)?;
        let w = cs_t.spmv(&r)?;
        let pw = p_beta_lu.solve(&w);
        let lhs = dot(&r, &pbr) + dot(&w, &pw);

        let u = bp_t.spmv(&r)?;
        let pu = p_alpha_lu.solve(&u);
        let t = bs_t.spmv(&r)?;
        let rhs = dot(&t, &pu);
        quadratic_forms.push((lhs, rhs));

        if (lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs() + rhs.abs()) {
            cond1 = false;
        }
        if rhs.abs() > 1e-12 {
            cond2 = false;
        }
        let in_null_bs = crate::linalg::vecops::norm2(&t) <= 1e-10 * b_scale;
        let in_null_bp = crate::linalg::vecops::norm2(&u) <= 1e-10 * b_scale;
        if !(in_null_bs || in_null_bp) {
            cond3 = false;
        }
    }

    let cond4 =
        is_positive_definite(sys.c())? || sp.b_s.nnz() == 0 || sp.b_p.nnz() == 0;
    let satisfied = subset_ok && (cond1 || cond2 || cond3 || cond4);
    Ok(SufficientConditionReport {
        null_basis,
        subset_ok,
        quadratic_forms,
        condition1: cond1,
        condition2: cond2,
        condition3: cond3,
        condition4: cond4,
        satisfied,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One evaluated unit-modulus eigenvalue in the a-posteriori necessary-
/// condition audit.
#[derive(Debug, Clone)]
pub struct UnitModulusFinding {
    pub lambda: (f64, f64),
    /// Per null-basis vector: the splitting-side quadratic form, the
    /// lambda-side complex value, and whether they coincide.
    pub evaluations: Vec<(f64, (f64, f64), bool)>,
    pub violating: bool,
}

#[derive(Debug, Clone)]
pub struct UnitCircleReport {
    pub findings: Vec<UnitModulusFinding>,
    /// True when no unit-modulus eigenvalue other than 1 exists.
    pub vacuous: bool,
    pub any_violation: bool,
}

/// Audits each eigenvalue on the unit circle away from 1 against the
/// characterization that would permit it: for a null vector r of C + C^T,
///
/// ```text
///   r^T (P_beta - B_S P_alpha^{-1} B_P^T + C_S P_beta^{-1} C_P) r
///     = (1 + lambda) / (1 - lambda) * r^T C r
/// ```
///
/// Matching values (1e-8 relative) flag the pair as a potential blocker of
/// semi-convergence. With no such eigenvalue the audit passes vacuously.
pub fn unit_circle_audit(
    sys: &SaddleSystem,
    cfg: &EpssConfig,
    spectral: &SpectralReport,
) -> Result<UnitCircleReport> {
    let offenders = spectral.spectrum.unit_modulus_excluding_one(spectral.unit_tol);
    if offenders.is_empty() {
        return Ok(UnitCircleReport { findings: Vec::new(), vacuous: true, any_violation: false });
    }
    cfg.splitting.validate_sums(sys, 1e-12)?;
    let sp = &cfg.splitting;
    let c_sym = sys.c().symmetric_part()?.scaled(2.0);
    let null_basis = nullspace(&c_sym.to_dense(), 1e-10)?;
    let (p_alpha_lu, p_beta_lu) = quadratic_form_tools(cfg)?;
    let cs_t = sp.c_s.transpose();
    let bs_t = sp.b_s.transpose();
    let bp_t = sp.b_p.transpose();

    // the lambda-independent side, one value per basis vector
    let mut splitting_side = Vec::new();
    let mut c_side = Vec::new();
    for jc in 0..null_basis.cols() {
        let r = null_basis.column(jc);
        let pbr = cfg.shifts.p_beta.spmv(&r)?;
        let u = bp_t.spmv(&r)?;
        let pu = p_alpha_lu.solve(&u);
        let t = bs_t.spmv(&r)?;
        let w = cs_t.spmv(&r)?;
        let cpr = sp.c_p.spmv(&r)?;
        let pw = p_beta_lu.solve(&cpr);
        splitting_side.push(dot(&r, &pbr) - dot(&t, &pu) + dot(&w, &pw));
        c_side.push(dot(&r, &sys.c().spmv(&r)?));
    }

    let mut findings = Vec::new();
    let mut any_violation = false;
    for (re, im) in offenders {
        // (1 + lambda) / (1 - lambda) = ((1 - |lambda|^2) + 2 i Im) / |1 - lambda|^2
        let denom = (1.0 - re) * (1.0 - re) + im * im;
        let factor_re = (1.0 - (re * re + im * im)) / denom;
        let factor_im = 2.0 * im / denom;
        let mut evaluations = Vec::new();
        let mut violating = false;
        for (s, &c) in splitting_side.iter().zip(&c_side) {
            let z_re = factor_re * c;
            let z_im = factor_im * c;
            let diff = ((s - z_re) * (s - z_re) + z_im * z_im).sqrt();
            let scale = 1.0f64.max(s.abs()).max((z_re * z_re + z_im * z_im).sqrt());
            let matches = diff <= 1e-8 * scale;
            if matches {
                violating = true;
                any_violation = true;
            }
            evaluations.push((*s, (z_re, z_im), matches));
        }
        findings.push(UnitModulusFinding { lambda: (re, im), evaluations, violating });
    }
    Ok(UnitCircleReport { findings, vacuous: false, any_violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precond::{preset_config, Preset};

    fn one_by_one_sepss() -> (SaddleSystem, EpssConfig) {
        let a = SparseMatrix::from_triplets(1, 1, &[(0, 0, 2.0)]).unwrap();
        let b = SparseMatrix::zeros(1, 1);
        let c = SparseMatrix::zeros(1, 1);
        let sys = SaddleSystem::new(a, b, c).unwrap();
        // the factorized splitting with unit shifts on both blocks
        let mut cfg = preset_config(Preset::Sepss, &sys, 1.0, 1.0).unwrap();
        cfg.shifts = crate::saddle::ShiftPair::identity(1, 1, 1.0, 1.0);
        (sys, cfg)
    }

    #[test]
    fn hand_case_iteration_matrix() {
        let (sys, cfg) = one_by_one_sepss();
        let gamma = iteration_matrix_dense(&sys, &cfg).unwrap();
        assert!((gamma.get(0, 0) + 1.0 / 3.0).abs() < 1e-14);
        assert!(gamma.get(0, 1).abs() < 1e-14);
        assert!(gamma.get(1, 0).abs() < 1e-14);
        assert!((gamma.get(1, 1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hand_case_certifies_semi_convergent() {
        let (sys, cfg) = one_by_one_sepss();
        let rep = certify(&sys, &cfg, UNIT_TOL, RANK_TOL).unwrap();
        assert!((rep.nu - 1.0 / 3.0).abs() < 1e-12);
        assert!(rep.has_unit_eigenvalue);
        assert_eq!(rep.rank_first, 1);
        assert_eq!(rep.rank_second, 1);
        assert!(rep.index_one);
        assert!(rep.semi_convergent);
        assert!(rep.nu <= rep.rho);
        // stationary direction is the second coordinate
        assert_eq!(rep.unit_eigenvector_basis.cols(), 1);
        assert!(rep.unit_eigenvector_basis.get(0, 0).abs() < 1e-10);
        assert!(rep.unit_eigenvector_basis.get(1, 0).abs() > 0.99);
    }

    #[test]
    fn jordan_block_fails_index_test() {
        let gamma =
            DenseMatrix::from_row_major(2, 2, vec![1.0, 1.0, 0.0, 1.0]).unwrap();
        let rep = certify_gamma(&gamma, UNIT_TOL, RANK_TOL).unwrap();
        assert_eq!(rep.rank_first, 1);
        assert_eq!(rep.rank_second, 0);
        assert!(!rep.index_one);
        assert!(!rep.semi_convergent);
        // nu is 0: both eigenvalues sit at 1
        assert_eq!(rep.nu, 0.0);
    }

    #[test]
    fn cayley_transform_spectrum() {
        // P = K, S = 0, Sigma = I on a symmetric PD system block gives
        // Gamma = (I - K)(I + K)^{-1} with eigenvalues (1 - mu)/(1 + mu)
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 0.5)]).unwrap();
        let b = SparseMatrix::zeros(1, 2);
        let c = SparseMatrix::from_triplets(1, 1, &[(0, 0, 3.0)]).unwrap();
        let sys = SaddleSystem::new(a, b, c).unwrap();
        let cfg = EpssConfig::custom(
            crate::saddle::SplittingSet {
                a_p: sys.a().clone(),
                a_s: SparseMatrix::zeros(2, 2),
                b_p: sys.b().clone(),
                b_s: SparseMatrix::zeros(1, 2),
                c_p: sys.c().clone(),
                c_s: SparseMatrix::zeros(1, 1),
            },
            crate::saddle::ShiftPair::identity(2, 1, 1.0, 1.0),
        );
        let gamma = iteration_matrix_dense(&sys, &cfg).unwrap();
        let spec = dense_eigenvalues(&gamma).unwrap();
        let mut got: Vec<f64> = spec.values().iter().map(|v| v.0).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want: Vec<f64> =
            [2.0f64, 0.5, 3.0].iter().map(|mu| (1.0 - mu) / (1.0 + mu)).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn huge_shifts_freeze_the_iteration() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 1.0)]).unwrap();
        let b = SparseMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap();
        let c = SparseMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap();
        let sys = SaddleSystem::new(a, b, c).unwrap();
        let cfg = preset_config(Preset::Gpss, &sys, 1e8, 1e8).unwrap();
        let gamma = iteration_matrix_dense(&sys, &cfg).unwrap();
        let diff = gamma.sub(&DenseMatrix::identity(3)).max_abs();
        assert!(diff < 1e-6, "Gamma should degenerate to I, defect {diff}");
    }

    #[test]
    fn sufficient_conditions_on_pd_c_are_vacuous() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 1.0)]).unwrap();
        let b = SparseMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap();
        let c = SparseMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap();
        let sys = SaddleSystem::new(a, b, c).unwrap();
        let cfg = preset_config(Preset::Ghss, &sys, 1.0, 1.0).unwrap();
        let rep = sufficient_condition_check(&sys, &cfg).unwrap();
        assert_eq!(rep.null_basis.cols(), 0);
        assert!(rep.subset_ok);
        assert!(rep.condition1 && rep.condition2 && rep.condition3 && rep.condition4);
        assert!(rep.satisfied);
    }

    #[test]
    fn condition4_via_vanishing_split_block() {
        // singular C, but the one-sided splitting zeroes B_S
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 1.0)]).unwrap();
        let b = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
        let c = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0)]).unwrap();
        let sys = SaddleSystem::new(a, b, c).unwrap();
        let cfg = preset_config(Preset::Gss, &sys, 1.0, 1.0).unwrap();
        let rep = sufficient_condition_check(&sys, &cfg).unwrap();
        assert_eq!(rep.null_basis.cols(), 1);
        assert!(rep.subset_ok);
        assert!(rep.condition4, "B_S = 0 must trigger the global condition");
        assert!(rep.satisfied);
        // and with the opposite one-sided splitting B_P = 0
        let cfg2 = preset_config(Preset::Gpss, &sys, 1.0, 1.0).unwrap();
        let rep2 = sufficient_condition_check(&sys, &cfg2).unwrap();
        assert!(rep2.condition4);
        assert!(rep2.satisfied);
    }

    #[test]
    fn unit_circle_audit_vacuous_when_spectrum_clean() {
        let (sys, cfg) = one_by_one_sepss();
        let rep = certify(&sys, &cfg, UNIT_TOL, RANK_TOL).unwrap();
        let th = unit_circle_audit(&sys, &cfg, &rep).unwrap();
        assert!(th.vacuous);
        assert!(!th.any_violation);
    }

    #[test]
    fn unit_eigenvectors_lie_in_system_nullspace() {
        let (sys, cfg) = one_by_one_sepss();
        let rep = certify(&sys, &cfg, UNIT_TOL, RANK_TOL).unwrap();
        for jc in 0..rep.unit_eigenvector_basis.cols() {
            let v = rep.unit_eigenvector_basis.column(jc);
            let mut kv = vec![0.0; sys.order()];
            sys.apply_flat(&v, &mut kv);
            assert!(kv.iter().all(|x| x.abs() < 1e-8));
        }
    }

    #[test]
    fn splitting_sums_are_enforced() {
        // hand the checker a splitting whose blocks do not sum to the system
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 1.0)]).unwrap();
        let b = SparseMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap();
        let c = SparseMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap();
        let sys = SaddleSystem::new(a, b, c).unwrap();
        let mut cfg = preset_config(Preset::Gpss, &sys, 1.0, 1.0).unwrap();
        cfg.splitting.a_p = SparseMatrix::from_triplets(2, 2, &[(0, 0, 5.0), (1, 1, 1.0)]).unwrap();
        assert!(iteration_matrix_dense(&sys, &cfg).is_err());
    }
}
