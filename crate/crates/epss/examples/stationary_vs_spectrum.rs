//! Run the alternating stationary iteration on a singular system and compare
//! the measured tail contraction of the residual against the certified radius
//! away from eigenvalue one. Asymptotically the two should agree.
//!
//! Usage: cargo run --example stationary_vs_spectrum [preset] [talpha]

use epss::analyzer::{certify, RANK_TOL, UNIT_TOL};
use epss::precond::{build_generic, preset_config, stationary_solve, Preset};
use epss::problems::{gen_synthetic_singular, rhs_from_ones, ProblemSpec};

fn main() -> epss::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "gss".to_string());
    let talpha: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(-0.5);

    let preset = Preset::parse(&name)?;
    let alpha = 10f64.powf(talpha);

    let spec = ProblemSpec::synthetic(24, 8, 7, 1, 19);
    let sys = gen_synthetic_singular(&spec)?;
    let cfg = preset_config(preset, &sys, alpha, alpha)?;

    let rep = certify(&sys, &cfg, UNIT_TOL, RANK_TOL)?;
    if !rep.semi_convergent {
        println!("preset {name} at alpha {alpha:.3e} is not semi-convergent here (nu = {:.6})", rep.nu);
        println!("pick a different shift and try again");
        return Ok(());
    }

    let op = build_generic(&sys, &cfg)?;
    let b = rhs_from_ones(&sys).concat();
    let u0 = vec![0.0; sys.order()];
    let (_, solve) = stationary_solve(&sys, &op, &b, &u0, 1e-12, 600)?;

    let hist = &solve.residual_history;
    println!("preset {name}, alpha = beta = {alpha:.3e}");
    println!("certified radius away from one: {:.8}", rep.nu);
    println!("stationary iteration: {} steps, final relative residual {:.3e}", solve.iterations, solve.final_relative_residual);

    // Geometric mean of the per-step contraction over the last stretch of the
    // history, stopping above the roundoff floor.
    let floor = 1e-11;
    if let Some(j1) = hist.iter().rposition(|&r| r >= floor) {
        let j0 = (j1 / 2).max(1);
        if j1 > j0 {
            let ratio = (hist[j1] / hist[j0]).powf(1.0 / (j1 - j0) as f64);
            println!("measured tail contraction:      {ratio:.8} (over steps {j0}..{j1})");
            println!("difference:                     {:+.2e}", ratio - rep.nu);
        }
    }

    println!("last residuals:");
    for (k, r) in hist.iter().enumerate().rev().take(5).collect::<Vec<_>>().into_iter().rev() {
        println!("  step {k:>4}  {r:.6e}");
    }
    Ok(())
}
