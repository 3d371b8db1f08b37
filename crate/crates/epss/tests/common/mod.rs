//! Dense reference evaluations used by the integration suites.
//!
//! Everything here recomputes the quantities under test by literal dense
//! formula assembly, deliberately avoiding the library's sparse columnwise
//! evaluation paths, so agreement is meaningful.

use epss::linalg::{DenseLu, DenseMatrix, SparseMatrix};
use epss::precond::EpssConfig;
use epss::saddle::SaddleSystem;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn dense_of(a: &SparseMatrix) -> DenseMatrix {
    a.to_dense()
}

/// Lower/upper triangular split of C: C = D + L + U gives the
/// definite part D + L + U^T and the skew part U - U^T.
pub fn dense_triangular_split(c: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let m = c.rows();
    let mut cp = DenseMatrix::zeros(m, m);
    let mut cs = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let v = c.get(i, j);
            if i == j {
                cp.set(i, j, cp.get(i, j) + v);
            } else if i > j {
                // strict lower: L lands in the definite part
                cp.set(i, j, cp.get(i, j) + v);
            } else {
                // strict upper: U^T into the definite part, U - U^T skew
                cp.set(j, i, cp.get(j, i) + v);
                cs.set(i, j, cs.get(i, j) + v);
                cs.set(j, i, cs.get(j, i) - v);
            }
        }
    }
    (cp, cs)
}

/// First shift formula by direct dense assembly:
/// sqrt( ||(B A_a^{-1} B^T + C_P) Q2^{-1} C_S||_F / ||Q2||_F ).
pub fn dense_beta_star(
    sys: &SaddleSystem,
    alpha: f64,
    q1: &SparseMatrix,
    q2: &SparseMatrix,
) -> f64 {
    let a = dense_of(sys.a());
    let b = dense_of(sys.b());
    let c = dense_of(sys.c());
    let q1d = dense_of(q1);
    let q2d = dense_of(q2);
    let (cp, cs) = dense_triangular_split(&c);

    let a_shift = a.add(&q1d.scaled(alpha));
    let a_lu = DenseLu::factor(&a_shift).expect("shifted A factors");
    let schur = b.matmul(&a_lu.solve_matrix(&b.transpose()));
    let q2_lu = DenseLu::factor(&q2d).expect("Q2 factors");
    let x = schur.add(&cp).matmul(&q2_lu.solve_matrix(&cs));
    (x.frobenius_norm() / q2d.frobenius_norm()).sqrt()
}

/// Second shift formula by direct dense assembly:
/// ( -trace((B B^T + C_P^T C_P) Q2^{-1} C_S^2 Q2^{-1}) / trace(Q2^2) )^(1/4).
/// Returns (radicand, value).
pub fn dense_beta_double_star(sys: &SaddleSystem, q2: &SparseMatrix) -> (f64, f64) {
    let b = dense_of(sys.b());
    let c = dense_of(sys.c());
    let q2d = dense_of(q2);
    let (cp, cs) = dense_triangular_split(&c);

    let z = b.matmul(&b.transpose()).add(&cp.transpose().matmul(&cp));
    let q2_lu = DenseLu::factor(&q2d).expect("Q2 factors");
    let inner = q2_lu.solve_matrix(&cs.matmul(&cs.matmul(&q2_lu.solve_matrix(&DenseMatrix::identity(
        q2d.rows(),
    )))));
    let radicand = -z.matmul(&inner).trace().expect("square") / q2d.matmul(&q2d).trace().expect("square");
    (radicand, radicand.max(0.0).sqrt().sqrt())
}

fn block_2x2(
    tl: &DenseMatrix,
    tr: &DenseMatrix,
    bl: &DenseMatrix,
    br: &DenseMatrix,
) -> DenseMatrix {
    let n = tl.rows();
    let m = br.rows();
    DenseMatrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
        (true, true) => tl.get(i, j),
        (true, false) => tr.get(i, j - n),
        (false, true) => bl.get(i - n, j),
        (false, false) => br.get(i - n, j - n),
    })
}

pub struct DenseSplitParts {
    pub p_block: DenseMatrix,
    pub s_block: DenseMatrix,
    pub sigma: DenseMatrix,
}

pub fn dense_split_parts(cfg: &EpssConfig) -> DenseSplitParts {
    let sp = &cfg.splitting;
    let n = sp.a_p.rows();
    let m = sp.c_p.rows();
    let p_block = block_2x2(
        &dense_of(&sp.a_p),
        &dense_of(&sp.b_p).transpose(),
        &dense_of(&sp.b_p).scaled(-1.0),
        &dense_of(&sp.c_p),
    );
    let s_block = block_2x2(
        &dense_of(&sp.a_s),
        &dense_of(&sp.b_s).transpose(),
        &dense_of(&sp.b_s).scaled(-1.0),
        &dense_of(&sp.c_s),
    );
    let sigma = block_2x2(
        &dense_of(&cfg.shifts.p_alpha),
        &DenseMatrix::zeros(n, m),
        &DenseMatrix::zeros(m, n),
        &dense_of(&cfg.shifts.p_beta),
    );
    DenseSplitParts { p_block, s_block, sigma }
}

/// The preconditioner as the literal three-factor product
/// (Sigma + P) Sigma^{-1} (Sigma + S).
pub fn dense_factored_product(cfg: &EpssConfig) -> DenseMatrix {
    let parts = dense_split_parts(cfg);
    let plus_p = parts.sigma.add(&parts.p_block);
    let plus_s = parts.sigma.add(&parts.s_block);
    let sigma_lu = DenseLu::factor(&parts.sigma).expect("shift block factors");
    plus_p.matmul(&sigma_lu.solve_matrix(&plus_s))
}

/// The preconditioner multiplied out blockwise:
/// Sigma + P + S + P Sigma^{-1} S, with the product block expanded through
/// the splitting pieces.
pub fn dense_expanded_blocks(sys: &SaddleSystem, cfg: &EpssConfig) -> DenseMatrix {
    let sp = &cfg.splitting;
    let n = sp.a_p.rows();
    let m = sp.c_p.rows();
    let a_p = dense_of(&sp.a_p);
    let a_s = dense_of(&sp.a_s);
    let b_p = dense_of(&sp.b_p);
    let b_s = dense_of(&sp.b_s);
    let c_p = dense_of(&sp.c_p);
    let c_s = dense_of(&sp.c_s);
    let pa = dense_of(&cfg.shifts.p_alpha);
    let pb = dense_of(&cfg.shifts.p_beta);
    let pa_lu = DenseLu::factor(&pa).expect("alpha shift factors");
    let pb_lu = DenseLu::factor(&pb).expect("beta shift factors");

    // P Sigma^{-1} S split into its four blocks
    let inv_a_s = pa_lu.solve_matrix(&a_s);
    let inv_bst = pa_lu.solve_matrix(&b_s.transpose());
    let inv_b_s = pb_lu.solve_matrix(&b_s);
    let inv_c_s = pb_lu.solve_matrix(&c_s);
    let tl = a_p.matmul(&inv_a_s).sub(&b_p.transpose().matmul(&inv_b_s));
    let tr = a_p.matmul(&inv_bst).add(&b_p.transpose().matmul(&inv_c_s));
    let bl = b_p.matmul(&inv_a_s).scaled(-1.0).sub(&c_p.matmul(&inv_b_s));
    let br = c_p.matmul(&inv_c_s).sub(&b_p.matmul(&inv_bst));
    let cross = block_2x2(&tl, &tr, &bl, &br);

    let a = dense_of(sys.a());
    let b = dense_of(sys.b());
    let c = dense_of(sys.c());
    let saddle = block_2x2(&a, &b.transpose(), &b.scaled(-1.0), &c);
    let sigma = block_2x2(&pa, &DenseMatrix::zeros(n, m), &DenseMatrix::zeros(m, n), &pb);
    sigma.add(&saddle).add(&cross)
}

/// Dense iteration matrix M^{-1} N with M = (1/2) of the preconditioner and
/// N = M - K, evaluated literally.
pub fn dense_mn_iteration_matrix(sys: &SaddleSystem, cfg: &EpssConfig) -> DenseMatrix {
    let pre = dense_factored_product(cfg);
    let m_half = pre.scaled(0.5);
    let a = dense_of(sys.a());
    let b = dense_of(sys.b());
    let c = dense_of(sys.c());
    let saddle = block_2x2(&a, &b.transpose(), &b.scaled(-1.0), &c);
    let n_half = m_half.sub(&saddle);
    DenseLu::factor(&m_half).expect("M factors").solve_matrix(&n_half)
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).max_abs()
}

/// The coefficient matrix [[A, B^T], [-B, C]] as one dense block.
pub fn dense_saddle(sys: &SaddleSystem) -> DenseMatrix {
    let a = dense_of(sys.a());
    let b = dense_of(sys.b());
    let c = dense_of(sys.c());
    block_2x2(&a, &b.transpose(), &b.scaled(-1.0), &c)
}

/// The factorized preconditioner assembled the way its solve algorithm sees
/// it: [[A + P_a, B^T], [-B, C_P + P_b]] times blockdiag(I, P_b^{-1}(C_S + P_b)).
pub fn dense_sepss_matrix(sys: &SaddleSystem, cfg: &EpssConfig) -> DenseMatrix {
    let n = sys.n();
    let m = sys.m();
    let a = dense_of(sys.a());
    let b = dense_of(sys.b());
    let c_p = dense_of(&cfg.splitting.c_p);
    let c_s = dense_of(&cfg.splitting.c_s);
    let pa = dense_of(&cfg.shifts.p_alpha);
    let pb = dense_of(&cfg.shifts.p_beta);
    let left = block_2x2(&a.add(&pa), &b.transpose(), &b.scaled(-1.0), &c_p.add(&pb));
    let pb_lu = DenseLu::factor(&pb).expect("beta shift factors");
    let right = block_2x2(
        &DenseMatrix::identity(n),
        &DenseMatrix::zeros(n, m),
        &DenseMatrix::zeros(m, n),
        &pb_lu.solve_matrix(&c_s.add(&pb)),
    );
    left.matmul(&right)
}

/// The iteration matrix as the literal four-factor product
/// (Sigma + S)^{-1} (Sigma - P) (Sigma + P)^{-1} (Sigma - S).
pub fn dense_gamma_four_factor(cfg: &EpssConfig) -> DenseMatrix {
    let parts = dense_split_parts(cfg);
    let plus_p = parts.sigma.add(&parts.p_block);
    let plus_s = parts.sigma.add(&parts.s_block);
    let minus_p = parts.sigma.sub(&parts.p_block);
    let minus_s = parts.sigma.sub(&parts.s_block);
    let inner = minus_p.matmul(&DenseLu::factor(&plus_p).expect("factors").solve_matrix(&minus_s));
    DenseLu::factor(&plus_s).expect("factors").solve_matrix(&inner)
}

/// The iteration matrix as I - 2 * P^{-1} K with P the factored product.
pub fn dense_gamma_via_inverse(sys: &SaddleSystem, cfg: &EpssConfig) -> DenseMatrix {
    let pre = dense_factored_product(cfg);
    let k = dense_saddle(sys);
    let two_solve = DenseLu::factor(&pre).expect("factors").solve_matrix(&k).scaled(2.0);
    DenseMatrix::identity(k.rows()).sub(&two_solve)
}

/// Knobs for `random_system`. Rank deficits are capped to keep at least
/// rank one in each block.
pub struct RandomSystemShape {
    pub n: usize,
    pub m: usize,
    /// rank(B) = m - b_rank_deficit.
    pub b_rank_deficit: usize,
    /// dim null(C) = c_null_dim (C stays symmetric PSD).
    pub c_null_dim: usize,
}

/// Dense-random saddle system: A positive definite but nonsymmetric,
/// C = G^T G symmetric PSD with a prescribed nullity, B with a prescribed
/// rank. Built without the library's synthetic generator so the two
/// construction paths stay independent.
pub fn random_system(rng: &mut ChaCha8Rng, shape: &RandomSystemShape) -> SaddleSystem {
    let n = shape.n;
    let m = shape.m;
    let rank_b = m.saturating_sub(shape.b_rank_deficit).max(1).min(m.min(n));
    let rank_c = m.saturating_sub(shape.c_null_dim);

    let r = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let sym = r.matmul(&r.transpose());
    let skew = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        let ridge = if i == j { 0.5 * n as f64 } else { 0.0 };
        sym.get(i, j) / n as f64 + 0.5 * (skew.get(i, j) - skew.get(j, i)) + ridge
    });

    let g = DenseMatrix::from_fn(rank_c.max(1), m, |_, _| rng.gen_range(-1.0..1.0));
    let c = if rank_c == 0 {
        DenseMatrix::zeros(m, m)
    } else {
        g.transpose().matmul(&g).scaled(1.0 / m as f64)
    };

    let u = DenseMatrix::from_fn(m, rank_b, |_, _| rng.gen_range(-1.0..1.0));
    let v = DenseMatrix::from_fn(rank_b, n, |_, _| rng.gen_range(-1.0..1.0));
    let b = u.matmul(&v).scaled(1.0 / (n as f64).sqrt());

    SaddleSystem::new(
        SparseMatrix::from_dense(&a),
        SparseMatrix::from_dense(&b),
        SparseMatrix::from_dense(&c),
    )
    .expect("dimensions are consistent")
}
