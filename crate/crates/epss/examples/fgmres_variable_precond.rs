//! Flexible restarted GMRES with a preconditioner that changes between steps:
//! early steps use a cheap aggressively-dropped factorization, later steps the
//! exact one. Plain GMRES would be unsound under a changing preconditioner;
//! the flexible variant tracks the per-step applications explicitly.
//!
//! Usage: cargo run --example fgmres_variable_precond [q]

use epss::krylov::{fgmres, gmres, FlexPrecond, SolveOptions};
use epss::precond::{beta_star, build_sepss_with, shift_bases, EpssOperator, SepssOptions};
use epss::problems::{gen_oseen, rhs_from_ones, ProblemSpec};

struct SwitchingPrecond {
    rough: EpssOperator,
    exact: EpssOperator,
    switch_at: usize,
    rough_uses: usize,
    exact_uses: usize,
}

impl FlexPrecond for SwitchingPrecond {
    fn size(&self) -> usize {
        self.exact.order()
    }
    fn apply_step(&mut self, step: usize, r: &[f64], z: &mut [f64]) {
        let op = if step < self.switch_at {
            self.rough_uses += 1;
            &self.rough
        } else {
            self.exact_uses += 1;
            &self.exact
        };
        if op.apply_flat(r, z).is_err() {
            z.copy_from_slice(r);
        }
    }
}

fn main() -> epss::Result<()> {
    let q: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);

    let prob = gen_oseen(&ProblemSpec::oseen(q))?;
    let sys = prob.system;
    let alpha = 1e-4;
    let (q1, q2) = shift_bases(&sys)?;
    let beta = beta_star(&sys, alpha, &q1, &q2)?;

    let exact = build_sepss_with(&sys, alpha, &q1, beta, &q2, SepssOptions::default())?;
    let rough = build_sepss_with(
        &sys,
        alpha,
        &q1,
        beta,
        &q2,
        SepssOptions { drop_tol: 1e-2 },
    )?;
    println!(
        "flow grid q={q}: exact build {:.3}s, dropped build {:.3}s",
        exact.build_seconds(),
        rough.build_seconds()
    );

    let b = rhs_from_ones(&sys).concat();
    let x0 = vec![0.0; sys.order()];
    let opts = SolveOptions::default();

    let (_, fixed) = gmres(&sys, Some(&exact), &b, &x0, &opts)?;
    println!(
        "plain restarted solve, exact preconditioner:   {} steps, residual {:.3e}",
        fixed.iterations, fixed.final_relative_residual
    );

    let mut switching = SwitchingPrecond {
        rough,
        exact,
        switch_at: 10,
        rough_uses: 0,
        exact_uses: 0,
    };
    let (_, flex) = fgmres(&sys, &mut switching, &b, &x0, &opts)?;
    println!(
        "flexible solve, rough first then exact:        {} steps, residual {:.3e}",
        flex.iterations, flex.final_relative_residual
    );
    println!(
        "preconditioner applications: {} rough, {} exact",
        switching.rough_uses, switching.exact_uses
    );
    Ok(())
}
