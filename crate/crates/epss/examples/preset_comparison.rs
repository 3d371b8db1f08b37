//! Run every splitting preset on the same singular synthetic system at fixed
//! shifts and print an iteration-count table, so the relative strength of the
//! ten variants is visible side by side.
//!
//! Usage: cargo run --example preset_comparison [talpha] [tbeta]

use epss::bench::{run_cell, BenchConfig, PresetChoice};
use epss::precond::Preset;
use epss::problems::{gen_synthetic_singular, rhs_from_ones, ProblemSpec};

fn main() -> epss::Result<()> {
    let mut args = std::env::args().skip(1);
    let talpha: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(-1.0);
    let tbeta: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(talpha);

    let spec = ProblemSpec::synthetic(60, 20, 18, 1, 11);
    let sys = gen_synthetic_singular(&spec)?;
    let b = rhs_from_ones(&sys).concat();
    let config = BenchConfig::default();

    println!(
        "synthetic n={} m={} (singular), shifts 10^{talpha} / 10^{tbeta}",
        sys.n(),
        sys.m()
    );
    println!("{:<8} {:>5} {:>12} {:>9}", "preset", "IT", "residual", "cpu_s");
    for preset in Preset::all() {
        let row =
            run_cell(&sys, &b, PresetChoice::Plain(preset), talpha, Some(tbeta), &config, None);
        match &row.failure {
            Some(why) => println!("{:<8} {:>5} {why}", row.preset, "-"),
            None => println!(
                "{:<8} {:>5} {:>12.3e} {:>9.4}",
                row.preset,
                if row.converged { row.iterations.to_string() } else { "x".to_string() },
                row.residual,
                row.cpu_s
            ),
        }
    }
    Ok(())
}
