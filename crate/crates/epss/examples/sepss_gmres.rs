//! Solve a lid-driven cavity style flow system with the factorized
//! preconditioner at formula-chosen shifts, printing the restart-by-restart
//! convergence trace.
//!
//! Usage: cargo run --example sepss_gmres [q] [viscosity]

use epss::krylov::{gmres, SolveOptions};
use epss::precond::{beta_star, build_sepss_with, shift_bases, SepssOptions};
use epss::problems::{gen_oseen, rhs_from_ones, ProblemSpec};

fn main() -> epss::Result<()> {
    let mut args = std::env::args().skip(1);
    let q: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(16);
    let nu: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.01);

    let mut spec = ProblemSpec::oseen(q);
    spec.viscosity = nu;
    let prob = gen_oseen(&spec)?;
    let sys = &prob.system;
    println!(
        "grid {q} x {q}, viscosity {nu}: n = {}, m = {}, order {}",
        sys.n(),
        sys.m(),
        sys.order()
    );

    let alpha = 1e-4;
    let (q1, q2) = shift_bases(sys)?;
    let beta = beta_star(sys, alpha, &q1, &q2)?;
    println!("shifts: alpha = {alpha:.3e}, beta = beta* = {beta:.6e}");

    let op = build_sepss_with(sys, alpha, &q1, beta, &q2, SepssOptions::default())?;
    println!("factorized build took {:.3}s", op.build_seconds());

    let b = rhs_from_ones(sys).concat();
    let x0 = vec![0.0; sys.order()];
    let opts = SolveOptions::default();
    let (u, rep) = gmres(sys, Some(&op), &b, &x0, &opts)?;

    println!(
        "{} after {} steps ({:.3}s): true relative residual {:.3e}",
        if rep.converged { "converged" } else { "did not converge" },
        rep.iterations,
        rep.wall_seconds,
        rep.final_relative_residual
    );
    println!("restart trace (step, true relative residual):");
    for (it, res) in &rep.restart_residuals {
        println!("  {it:>5}  {res:.6e}");
    }
    let head: Vec<f64> = u.iter().take(4).copied().collect();
    println!("first solution entries: {head:?}");
    Ok(())
}
