//! Build one flow problem and one synthetic singular problem, then print the
//! structural diagnostics that the preconditioner theory cares about: is A
//! positive definite, is C positive semidefinite, is B rank deficient, and do
//! null(B^T) and null(C) intersect (which makes the whole system singular).
//!
//! Usage: cargo run --example generate_and_validate [q]

use epss::problems::{gen_oseen, gen_synthetic_singular, ProblemSpec};
use epss::saddle::SaddleSystem;

fn report(label: &str, sys: &SaddleSystem) -> epss::Result<()> {
    let d = sys.validate()?;
    println!("{label}: n = {}, m = {}", d.n, d.m);
    println!("  A positive definite        {:?}", d.a_positive_definite);
    println!("  C positive semidefinite    {:?}", d.c_positive_semidefinite);
    println!("  rank(B) (of {})            {:?}", d.m, d.rank_b);
    println!("  dim null(C + C^T)          {:?}", d.null_dim_c_sym);
    println!("  singular saddle matrix     {:?}", d.null_intersection_nontrivial);
    Ok(())
}

fn main() -> epss::Result<()> {
    let q: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);

    let prob = gen_oseen(&ProblemSpec::oseen(q))?;
    report(&format!("flow grid q={q}"), &prob.system)?;
    if prob.delta_shift != 0.0 {
        println!("  (A needed a diagonal repair of {:.3e})", prob.delta_shift);
    }

    println!();
    let spec = ProblemSpec::synthetic(40, 12, 10, 2, 7);
    let sys = gen_synthetic_singular(&spec)?;
    report("synthetic n=40 m=12 rank(B)=10 null(C)=2", &sys)?;
    Ok(())
}
