//! Command-line harness: generate test problems, run preconditioned solves,
//! sweep shift parameters, and certify the stationary iteration spectrally.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use epss::analyzer::{certify, sufficient_condition_check, unit_circle_audit, RANK_TOL, UNIT_TOL};
use epss::bench::{
    row_to_json, rows_to_csv, rows_to_text, run_cell, run_sweep, sweep_to_json, BenchConfig,
    PresetChoice, SolverKind, SweepRange, SweepSpec,
};
use epss::krylov::SolveOptions;
use epss::precond::{beta_double_star, beta_star, preset_config, shift_bases, Preset};
use epss::problems::{
    gen_oseen, gen_synthetic_singular, read_system, rhs_from_ones, write_system, ProblemKind,
    ProblemSpec,
};
use epss::saddle::SaddleSystem;
use epss::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "epss",
    about = "Splitting preconditioners for generalized saddle point systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a test problem and write it as MatrixMarket files plus a manifest
    Gen(GenArgs),
    /// Solve one problem with one preconditioner setting
    Run(RunArgs),
    /// Certify semi-convergence of the stationary iteration spectrally
    Certify(CertifyArgs),
    /// Sweep shift exponents over one or more presets
    Sweep(SweepArgs),
}

/// Where the system comes from: a saved manifest or a generator.
#[derive(Args, Debug, Clone, Default)]
struct ProblemOpts {
    /// Manifest file written by `gen`
    #[arg(long, value_name = "MANIFEST")]
    problem: Option<PathBuf>,
    /// Generator: oseen | synthetic
    #[arg(long)]
    kind: Option<String>,
    /// Cells per side of the flow grid
    #[arg(long)]
    grid: Option<usize>,
    /// Viscosity of the flow problem
    #[arg(long)]
    nu: Option<f64>,
    /// Seed for the synthetic generator
    #[arg(long)]
    seed: Option<u64>,
    /// Velocity-block size (synthetic)
    #[arg(long)]
    n: Option<usize>,
    /// Pressure-block size (synthetic)
    #[arg(long)]
    m: Option<usize>,
    /// Rank of the coupling block (synthetic)
    #[arg(long)]
    rank_b: Option<usize>,
    /// Nullity of the symmetric part of the C block (synthetic)
    #[arg(long)]
    null_dim: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct SolveOpts {
    /// Restart length
    #[arg(long)]
    restart: Option<usize>,
    /// Relative residual tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap
    #[arg(long)]
    max_iters: Option<usize>,
    /// Wall-clock cap in seconds
    #[arg(long)]
    max_time: Option<f64>,
    /// gmres | fgmres | stationary
    #[arg(long)]
    solver: Option<String>,
    /// Relative drop threshold in the factorized build (0 = exact)
    #[arg(long)]
    drop_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    problem: ProblemOpts,
    /// Settings file; command-line flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Basename for the emitted files
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemOpts,
    #[command(flatten)]
    solve: SolveOpts,
    /// Settings file; command-line flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset name, or sepss* / sepss** for the formula-chosen shifts
    #[arg(long)]
    preset: Option<String>,
    /// log10 of alpha
    #[arg(long, allow_negative_numbers = true)]
    talpha: Option<f64>,
    /// log10 of beta (two-parameter presets; defaults to talpha)
    #[arg(long, allow_negative_numbers = true)]
    tbeta: Option<f64>,
    /// json | csv | text
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    problem: ProblemOpts,
    /// Settings file; command-line flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset name, or sepss* / sepss** for the formula-chosen shifts
    #[arg(long)]
    preset: Option<String>,
    /// log10 of alpha
    #[arg(long, allow_negative_numbers = true)]
    talpha: Option<f64>,
    /// log10 of beta (two-parameter presets; defaults to talpha)
    #[arg(long, allow_negative_numbers = true)]
    tbeta: Option<f64>,
    /// json | text
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemOpts,
    #[command(flatten)]
    solve: SolveOpts,
    /// Settings file; command-line flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated preset names; `all` expands to every preset
    #[arg(long)]
    presets: Option<String>,
    /// alpha exponent range start:step:end
    #[arg(long, allow_hyphen_values = true)]
    talpha: Option<String>,
    /// beta exponent range start:step:end
    #[arg(long, allow_hyphen_values = true)]
    tbeta: Option<String>,
    /// json | csv | text
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Mirror of every flag a settings file may carry.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileSettings {
    problem: Option<PathBuf>,
    kind: Option<String>,
    grid: Option<usize>,
    nu: Option<f64>,
    seed: Option<u64>,
    n: Option<usize>,
    m: Option<usize>,
    rank_b: Option<usize>,
    null_dim: Option<usize>,
    preset: Option<String>,
    presets: Option<String>,
    talpha: Option<String>,
    tbeta: Option<String>,
    restart: Option<usize>,
    tol: Option<f64>,
    max_iters: Option<usize>,
    max_time: Option<f64>,
    solver: Option<String>,
    drop_tol: Option<f64>,
    format: Option<String>,
    out: Option<PathBuf>,
    stem: Option<String>,
}

fn load_settings(path: &Option<PathBuf>) -> Result<FileSettings> {
    match path {
        None => Ok(FileSettings::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Invalid(format!("bad settings file {}: {e}", p.display())))
        }
    }
}

fn merge_problem(cli: &ProblemOpts, file: &FileSettings) -> ProblemOpts {
    ProblemOpts {
        problem: cli.problem.clone().or_else(|| file.problem.clone()),
        kind: cli.kind.clone().or_else(|| file.kind.clone()),
        grid: cli.grid.or(file.grid),
        nu: cli.nu.or(file.nu),
        seed: cli.seed.or(file.seed),
        n: cli.n.or(file.n),
        m: cli.m.or(file.m),
        rank_b: cli.rank_b.or(file.rank_b),
        null_dim: cli.null_dim.or(file.null_dim),
    }
}

fn merge_solve(cli: &SolveOpts, file: &FileSettings) -> SolveOpts {
    SolveOpts {
        restart: cli.restart.or(file.restart),
        tol: cli.tol.or(file.tol),
        max_iters: cli.max_iters.or(file.max_iters),
        max_time: cli.max_time.or(file.max_time),
        solver: cli.solver.clone().or_else(|| file.solver.clone()),
        drop_tol: cli.drop_tol.or(file.drop_tol),
    }
}

fn bench_config(s: &SolveOpts) -> Result<BenchConfig> {
    let solver = match &s.solver {
        Some(name) => SolverKind::parse(name)?,
        None => SolverKind::Gmres,
    };
    Ok(BenchConfig {
        solver,
        opts: SolveOptions {
            restart: s.restart.unwrap_or(20),
            rel_tol: s.tol.unwrap_or(1e-9),
            max_iters: s.max_iters.unwrap_or(1000),
            max_time_s: s.max_time.unwrap_or(1000.0),
        },
        sepss_drop_tol: s.drop_tol.unwrap_or(0.0),
    })
}

fn problem_spec(p: &ProblemOpts) -> Result<ProblemSpec> {
    let kind = p.kind.as_deref().unwrap_or("oseen").to_ascii_lowercase();
    match kind.as_str() {
        "oseen" | "oseen-fd" => {
            let mut spec = ProblemSpec::oseen(p.grid.unwrap_or(16));
            if let Some(nu) = p.nu {
                spec.viscosity = nu;
            }
            Ok(spec)
        }
        "synthetic" | "synthetic-singular" => {
            let n = p.n.unwrap_or(60);
            let m = p.m.unwrap_or(24);
            let rank_b = p.rank_b.unwrap_or(m.saturating_sub(2));
            let null_dim = p.null_dim.unwrap_or(1);
            Ok(ProblemSpec::synthetic(n, m, rank_b, null_dim, p.seed.unwrap_or(1)))
        }
        other => Err(Error::Invalid(format!(
            "unknown problem kind '{other}' (expected oseen or synthetic)"
        ))),
    }
}

struct LoadedProblem {
    sys: SaddleSystem,
    label: String,
    /// Diagonal repair applied to the flow problem's A block, if any.
    delta_shift: f64,
}

fn load_problem(p: &ProblemOpts) -> Result<LoadedProblem> {
    if let Some(path) = &p.problem {
        let (sys, manifest) = read_system(path)?;
        return Ok(LoadedProblem {
            sys,
            label: format!("{} ({})", path.display(), manifest.kind),
            delta_shift: 0.0,
        });
    }
    let spec = problem_spec(p)?;
    match spec.kind {
        ProblemKind::OseenFd => {
            let prob = gen_oseen(&spec)?;
            Ok(LoadedProblem {
                label: format!("flow grid q={} nu={}", prob.q, prob.viscosity),
                delta_shift: prob.delta_shift,
                sys: prob.system,
            })
        }
        ProblemKind::SyntheticSingular => {
            let sys = gen_synthetic_singular(&spec)?;
            Ok(LoadedProblem {
                label: format!(
                    "synthetic n={} m={} rank_b={} null_dim={} seed={}",
                    spec.n, spec.m, spec.rank_b, spec.null_dim_c, spec.seed
                ),
                delta_shift: 0.0,
                sys,
            })
        }
        ProblemKind::Imported => Err(Error::Invalid("imported problems need --problem".to_string())),
    }
}

/// The all-ones vector is the exact solution of b = K*1 only when the system
/// is provably nonsingular; otherwise no error column is reported.
fn reference_solution(sys: &SaddleSystem) -> Option<Vec<f64>> {
    match sys.validate() {
        Ok(d) if d.null_intersection_nontrivial == Some(false) => Some(vec![1.0; sys.order()]),
        _ => None,
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
    }
}

fn warn_shift(lp: &LoadedProblem) {
    if lp.delta_shift != 0.0 {
        eprintln!(
            "note: A block needed a diagonal repair of {:.3e} to become positive definite",
            lp.delta_shift
        );
    }
}

fn cmd_gen(args: &GenArgs) -> Result<bool> {
    let file = load_settings(&args.config)?;
    let p = merge_problem(&args.problem, &file);
    let spec = problem_spec(&p)?;
    let out_dir = args.out.clone().or_else(|| file.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    let stem = args.stem.clone().or_else(|| file.stem.clone()).unwrap_or_else(|| match spec.kind {
        ProblemKind::OseenFd => format!("oseen-q{}", spec.q),
        _ => format!("synthetic-n{}-m{}-s{}", spec.n, spec.m, spec.seed),
    });

    let (sys, kind, mut notes, wind, label) = match spec.kind {
        ProblemKind::OseenFd => {
            let prob = gen_oseen(&spec)?;
            let mut notes = vec![format!("viscosity={}", prob.viscosity), format!("gamma={}", prob.gamma)];
            if prob.delta_shift != 0.0 {
                notes.push(format!("delta_shift={}", prob.delta_shift));
            }
            let label = format!("flow grid q={}", prob.q);
            (prob.system, ProblemKind::OseenFd, notes, Some(spec.wind.clone()), label)
        }
        ProblemKind::SyntheticSingular => {
            let sys = gen_synthetic_singular(&spec)?;
            let notes = vec![format!(
                "rank_b={} null_dim_c={} seed={}",
                spec.rank_b, spec.null_dim_c, spec.seed
            )];
            let label = format!("synthetic n={} m={}", spec.n, spec.m);
            (sys, ProblemKind::SyntheticSingular, notes, None, label)
        }
        ProblemKind::Imported => return Err(Error::Invalid("gen needs a generator kind".to_string())),
    };

    if let Ok(d) = sys.validate() {
        notes.push(format!(
            "a_pd={:?} c_psd={:?} rank_b={:?} singular={:?}",
            d.a_positive_definite, d.c_positive_semidefinite, d.rank_b, d.null_intersection_nontrivial
        ));
    }
    let kind_name = match kind {
        ProblemKind::OseenFd => "oseen-fd",
        ProblemKind::SyntheticSingular => "synthetic-singular",
        ProblemKind::Imported => "imported",
    };
    std::fs::create_dir_all(&out_dir)?;
    let manifest = write_system(&sys, &out_dir, &stem, kind_name, wind.as_deref(), &notes)?;
    println!(
        "wrote {} (order {}: n={}, m={})",
        manifest.display(),
        sys.order(),
        sys.n(),
        sys.m()
    );
    println!("{label}");
    Ok(true)
}

fn cmd_run(args: &RunArgs) -> Result<bool> {
    let file = load_settings(&args.config)?;
    let p = merge_problem(&args.problem, &file);
    let s = merge_solve(&args.solve, &file);
    let config = bench_config(&s)?;
    let preset_name = args
        .preset
        .clone()
        .or_else(|| file.preset.clone())
        .unwrap_or_else(|| "sepss".to_string());
    let choice = PresetChoice::parse(&preset_name)?;
    let talpha = args
        .talpha
        .or_else(|| file.talpha.as_deref().and_then(|v| v.parse().ok()))
        .unwrap_or(0.0);
    let tbeta = args.tbeta.or_else(|| file.tbeta.as_deref().and_then(|v| v.parse().ok()));
    let format = args.format.clone().or_else(|| file.format.clone()).unwrap_or_else(|| "text".to_string());

    let lp = load_problem(&p)?;
    warn_shift(&lp);
    let b = rhs_from_ones(&lp.sys).concat();
    let reference = reference_solution(&lp.sys);
    let row = run_cell(&lp.sys, &b, choice, talpha, tbeta, &config, reference.as_deref());

    let rendered = match format.as_str() {
        "json" => row_to_json(&row),
        "csv" => rows_to_csv(std::slice::from_ref(&row)),
        "text" => format!("{}\n{}", lp.label, rows_to_text(std::slice::from_ref(&row))),
        other => return Err(Error::Invalid(format!("unknown format '{other}'"))),
    };
    emit(&rendered, &args.out.clone().or_else(|| file.out.clone()))?;
    Ok(row.converged)
}

fn render_certify_json(
    spectral: &epss::analyzer::SpectralReport,
    conditions: &epss::analyzer::SufficientConditionReport,
    circle: &epss::analyzer::UnitCircleReport,
) -> String {
    let spectrum: Vec<serde_json::Value> = spectral
        .spectrum
        .values()
        .iter()
        .map(|&(re, im)| serde_json::json!([re, im]))
        .collect();
    let findings: Vec<serde_json::Value> = circle
        .findings
        .iter()
        .map(|f| {
            serde_json::json!({
                "lambda": [f.lambda.0, f.lambda.1],
                "violating": f.violating,
                "evaluations": f.evaluations.iter().map(|(s, z, ok)| {
                    serde_json::json!({"splitting_side": s, "lambda_side": [z.0, z.1], "matches": ok})
                }).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "spectral": {
            "rho": spectral.rho,
            "nu": spectral.nu,
            "has_unit_eigenvalue": spectral.has_unit_eigenvalue,
            "near_one_count": spectral.near_one_count,
            "rank_first": spectral.rank_first,
            "rank_second": spectral.rank_second,
            "index_one": spectral.index_one,
            "semi_convergent": spectral.semi_convergent,
            "unit_tol": spectral.unit_tol,
            "rank_tol": spectral.rank_tol,
            "stationary_directions": spectral.unit_eigenvector_basis.cols(),
            "spectrum": spectrum,
        },
        "sufficient_conditions": {
            "subset_ok": conditions.subset_ok,
            "condition1": conditions.condition1,
            "condition2": conditions.condition2,
            "condition3": conditions.condition3,
            "condition4": conditions.condition4,
            "satisfied": conditions.satisfied,
            "quadratic_forms": conditions.quadratic_forms,
        },
        "unit_circle": {
            "vacuous": circle.vacuous,
            "any_violation": circle.any_violation,
            "findings": findings,
        },
        "certified": spectral.semi_convergent,
    });
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

fn render_certify_text(
    label: &str,
    preset: &str,
    alpha: f64,
    beta: f64,
    spectral: &epss::analyzer::SpectralReport,
    conditions: &epss::analyzer::SufficientConditionReport,
    circle: &epss::analyzer::UnitCircleReport,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("{label}\n"));
    out.push_str(&format!("preset {preset}  alpha {alpha:.6e}  beta {beta:.6e}\n"));
    out.push_str(&format!(
        "spectral radius          {:.12}\n\
         radius away from one     {:.12}\n\
         eigenvalues near one     {}\n\
         rank(I-G) / rank((I-G)^2) {} / {}\n\
         index-one at one         {}\n\
         semi-convergent          {}\n",
        spectral.rho,
        spectral.nu,
        spectral.near_one_count,
        spectral.rank_first,
        spectral.rank_second,
        spectral.index_one,
        spectral.semi_convergent,
    ));
    out.push_str(&format!(
        "sufficient-condition audit: subset {} c1 {} c2 {} c3 {} c4 {} -> {}\n",
        conditions.subset_ok,
        conditions.condition1,
        conditions.condition2,
        conditions.condition3,
        conditions.condition4,
        if conditions.satisfied { "satisfied" } else { "not established" },
    ));
    if circle.vacuous {
        out.push_str("unit-circle audit: no eigenvalue away from one on the unit circle\n");
    } else {
        for f in &circle.findings {
            out.push_str(&format!(
                "unit-circle eigenvalue ({:.6}, {:.6}): {}\n",
                f.lambda.0,
                f.lambda.1,
                if f.violating { "characterization violated" } else { "consistent" },
            ));
        }
    }
    out.push_str(&format!("certified: {}\n", spectral.semi_convergent));
    out
}

fn cmd_certify(args: &CertifyArgs) -> Result<bool> {
    let file = load_settings(&args.config)?;
    let p = merge_problem(&args.problem, &file);
    let preset_name = args
        .preset
        .clone()
        .or_else(|| file.preset.clone())
        .unwrap_or_else(|| "sepss".to_string());
    let choice = PresetChoice::parse(&preset_name)?;
    let talpha = args
        .talpha
        .or_else(|| file.talpha.as_deref().and_then(|v| v.parse().ok()))
        .unwrap_or(0.0);
    let tbeta = args.tbeta.or_else(|| file.tbeta.as_deref().and_then(|v| v.parse().ok()));
    let format = args.format.clone().or_else(|| file.format.clone()).unwrap_or_else(|| "text".to_string());

    let lp = load_problem(&p)?;
    warn_shift(&lp);

    let (preset, alpha, beta) = match choice {
        PresetChoice::Plain(preset) => {
            let alpha = 10f64.powf(talpha);
            let beta = 10f64.powf(tbeta.unwrap_or(talpha));
            (preset, alpha, beta)
        }
        PresetChoice::SepssStar => {
            let (q1, q2) = shift_bases(&lp.sys)?;
            let beta = beta_star(&lp.sys, 1e-4, &q1, &q2)?;
            if !(beta > 0.0) {
                return Err(Error::Invalid("formula produced a degenerate beta".to_string()));
            }
            (Preset::Sepss, 1e-4, beta)
        }
        PresetChoice::SepssStarStar => {
            let (_, q2) = shift_bases(&lp.sys)?;
            let beta = beta_double_star(&lp.sys, &q2)?;
            if !(beta > 0.0) {
                return Err(Error::Invalid("formula produced a degenerate beta".to_string()));
            }
            (Preset::Sepss, 1e-4, beta)
        }
    };

    let cfg = preset_config(preset, &lp.sys, alpha, beta)?;
    let spectral = certify(&lp.sys, &cfg, UNIT_TOL, RANK_TOL)?;
    let conditions = sufficient_condition_check(&lp.sys, &cfg)?;
    let circle = unit_circle_audit(&lp.sys, &cfg, &spectral)?;

    let rendered = match format.as_str() {
        "json" => render_certify_json(&spectral, &conditions, &circle),
        "text" => render_certify_text(
            &lp.label,
            &choice.label(),
            alpha,
            beta,
            &spectral,
            &conditions,
            &circle,
        ),
        other => return Err(Error::Invalid(format!("unknown format '{other}'"))),
    };
    emit(&rendered, &args.out.clone().or_else(|| file.out.clone()))?;
    Ok(spectral.semi_convergent)
}

fn cmd_sweep(args: &SweepArgs) -> Result<bool> {
    let file = load_settings(&args.config)?;
    let p = merge_problem(&args.problem, &file);
    let s = merge_solve(&args.solve, &file);
    let config = bench_config(&s)?;
    let preset_list = args
        .presets
        .clone()
        .or_else(|| file.presets.clone())
        .unwrap_or_else(|| "all".to_string());
    let presets: Vec<PresetChoice> = if preset_list.eq_ignore_ascii_case("all") {
        Preset::all().iter().map(|&pr| PresetChoice::Plain(pr)).collect()
    } else {
        preset_list
            .split(',')
            .map(|name| PresetChoice::parse(name.trim()))
            .collect::<Result<Vec<_>>>()?
    };
    let t_alpha = match args.talpha.clone().or_else(|| file.talpha.clone()) {
        Some(sr) => SweepRange::parse(&sr)?,
        None => SweepRange::default(),
    };
    let t_beta = match args.tbeta.clone().or_else(|| file.tbeta.clone()) {
        Some(sr) => SweepRange::parse(&sr)?,
        None => SweepRange::default(),
    };
    let format = args.format.clone().or_else(|| file.format.clone()).unwrap_or_else(|| "text".to_string());

    let lp = load_problem(&p)?;
    warn_shift(&lp);
    let b = rhs_from_ones(&lp.sys).concat();
    let reference = reference_solution(&lp.sys);
    let spec = SweepSpec { t_alpha, t_beta, presets, config };
    let outcome = run_sweep(&lp.sys, &b, &spec, reference.as_deref())?;

    let rendered = match format.as_str() {
        "json" => sweep_to_json(&outcome),
        "csv" => rows_to_csv(&outcome.rows),
        "text" => {
            let mut t = format!("{}\n{}", lp.label, rows_to_text(&outcome.rows));
            t.push_str("\nbest per preset:\n");
            t.push_str(&rows_to_text(&outcome.best));
            t
        }
        other => return Err(Error::Invalid(format!("unknown format '{other}'"))),
    };
    emit(&rendered, &args.out.clone().or_else(|| file.out.clone()))?;
    Ok(!outcome.best.is_empty() && outcome.best.iter().all(|r| r.converged))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Certify(a) => cmd_certify(a),
        Cmd::Sweep(a) => cmd_sweep(a),
    };
    match outcome {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
