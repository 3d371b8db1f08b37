//! Evaluate the two closed-form shift estimates on a flow problem and solve
//! with each of them, alongside a small hand sweep, to show where the formulas
//! land relative to the swept optimum.
//!
//! Usage: cargo run --example beta_parameter_estimates [q]

use epss::krylov::{gmres, SolveOptions};
use epss::precond::{beta_double_star, beta_star, build_sepss_with, shift_bases, SepssOptions};
use epss::problems::{gen_oseen, rhs_from_ones, ProblemSpec};
use epss::saddle::SaddleSystem;

fn solve_at(sys: &SaddleSystem, alpha: f64, beta: f64) -> epss::Result<(usize, bool)> {
    let (q1, q2) = shift_bases(sys)?;
    let op = build_sepss_with(sys, alpha, &q1, beta, &q2, SepssOptions::default())?;
    let b = rhs_from_ones(sys).concat();
    let x0 = vec![0.0; sys.order()];
    let (_, rep) = gmres(sys, Some(&op), &b, &x0, &SolveOptions::default())?;
    Ok((rep.iterations, rep.converged))
}

fn main() -> epss::Result<()> {
    let q: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);

    let prob = gen_oseen(&ProblemSpec::oseen(q))?;
    let sys = &prob.system;
    let alpha = 1e-4;
    let (q1, q2) = shift_bases(sys)?;

    let bs = beta_star(sys, alpha, &q1, &q2)?;
    let bss = beta_double_star(sys, &q2)?;
    println!("flow grid q={q}: n = {}, m = {}", sys.n(), sys.m());
    println!("beta*  (Schur-based estimate)  = {bs:.6e}");
    println!("beta** (trace-based estimate)  = {bss:.6e}");

    println!("\n{:>12} {:>6} {:>10}", "beta", "IT", "converged");
    for (label, beta) in [("beta*", bs), ("beta**", bss)] {
        let (it, ok) = solve_at(sys, alpha, beta)?;
        println!("{label:>12} {it:>6} {ok:>10}");
    }
    for t in [-2.0f64, -1.5, -1.0, -0.5, 0.0, 0.5] {
        let beta = 10f64.powf(t);
        let (it, ok) = solve_at(sys, alpha, beta)?;
        println!("{beta:>12.4e} {it:>6} {ok:>10}");
    }
    Ok(())
}
