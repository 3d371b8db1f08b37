//! Sweep and single-run protocol used by the command-line harness.
//!
//! The protocol mirrors the usual reporting style for this preconditioner
//! family: restarted GMRES with right preconditioning, zero initial guess,
//! b = K e, shift scales parameterized as powers of ten (alpha = 10^t), and
//! a per-preset best cell selected by minimum iteration count with CPU time
//! breaking ties. Reported CPU covers preconditioner build plus solve and
//! excludes problem generation; both sub-timings are kept so either
//! accounting can be recovered.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::krylov::{fgmres, gmres, FlexPrecond, SolveOptions, SolveReport};
use crate::linalg::vecops::{norm2, sub};
use crate::precond::{
    beta_double_star, beta_star, build_generic, build_sepss_with, preset_config, shift_bases,
    stationary_solve, EpssOperator, Preset, SepssOptions,
};
use crate::saddle::SaddleSystem;

/// Inclusive exponent range `start : step : end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub step: f64,
    pub end: f64,
}

impl Default for SweepRange {
    fn default() -> Self {
        SweepRange { start: -4.0, step: 0.25, end: 4.0 }
    }
}

impl SweepRange {
    pub fn new(start: f64, step: f64, end: f64) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !end.is_finite() || end < start {
            return Err(Error::invalid(format!(
                "range must satisfy start <= end with positive step, got {start}:{step}:{end}"
            )));
        }
        Ok(SweepRange { start, step, end })
    }

    /// Parses the `start:step:end` form.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("expected start:step:end, got '{s}'")));
        }
        let nums: Result<Vec<f64>> = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("bad number '{p}' in range '{s}'")))
            })
            .collect();
        let nums = nums?;
        SweepRange::new(nums[0], nums[1], nums[2])
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step).round() as usize + 1;
        (0..count)
            .map(|k| self.start + self.step * k as f64)
            .filter(|&t| t <= self.end + 1e-12 * self.step)
            .collect()
    }
}

/// What to run in a sweep cell: a plain preset at swept parameters, or the
/// factorized preconditioner at its formula-chosen shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetChoice {
    Plain(Preset),
    /// alpha = 1e-4, beta from the first formula.
    SepssStar,
    /// alpha = 1e-4, beta from the second formula.
    SepssStarStar,
}

impl PresetChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sepss*" | "sepss-star" => Ok(PresetChoice::SepssStar),
            "sepss**" | "sepss-star2" => Ok(PresetChoice::SepssStarStar),
            other => Preset::parse(other).map(PresetChoice::Plain),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PresetChoice::Plain(p) => p.name().to_string(),
            PresetChoice::SepssStar => "sepss*".to_string(),
            PresetChoice::SepssStarStar => "sepss**".to_string(),
        }
    }

    /// Whether the cell ignores the second exponent.
    pub fn sweeps_beta(&self) -> bool {
        matches!(self, PresetChoice::Plain(p) if p.two_parameter())
    }

    /// Formula-parameterized cells run once regardless of the ranges.
    pub fn is_fixed_parameter(&self) -> bool {
        !matches!(self, PresetChoice::Plain(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Gmres,
    Fgmres,
    Stationary,
}

impl SolverKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gmres" => Ok(SolverKind::Gmres),
            "fgmres" => Ok(SolverKind::Fgmres),
            "stationary" => Ok(SolverKind::Stationary),
            other => Err(Error::invalid(format!("unknown solver '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Gmres => "gmres",
            SolverKind::Fgmres => "fgmres",
            SolverKind::Stationary => "stationary",
        }
    }
}

/// Per-run knobs shared by every cell of a sweep.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub solver: SolverKind,
    pub opts: SolveOptions,
    /// Relative drop threshold used when forming the factorized
    /// preconditioner's Schur-type matrix; zero keeps it exact.
    pub sepss_drop_tol: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            solver: SolverKind::Gmres,
            opts: SolveOptions::default(),
            sepss_drop_tol: 0.0,
        }
    }
}

/// One executed cell.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub preset: String,
    pub t_alpha: f64,
    /// Absent for single-parameter presets.
    pub t_beta: Option<f64>,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub iterations: usize,
    pub cpu_s: f64,
    pub build_s: f64,
    pub solve_s: f64,
    /// True relative residual at exit.
    pub residual: f64,
    /// Relative error against the reference solution, when one is known.
    pub error: Option<f64>,
    pub converged: bool,
    /// Build or solve failure, recorded instead of aborting a sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

struct FixedFlex<'a>(&'a EpssOperator);

impl FlexPrecond for FixedFlex<'_> {
    fn size(&self) -> usize {
        self.0.order()
    }

    fn apply_step(&mut self, _step: usize, r: &[f64], z: &mut [f64]) {
        self.0.apply_flat(r, z).expect("operator and vector sizes agree");
    }
}

fn build_choice(
    sys: &SaddleSystem,
    choice: PresetChoice,
    t_alpha: f64,
    t_beta: Option<f64>,
    drop_tol: f64,
) -> Result<(EpssOperator, f64, Option<f64>, f64, Option<f64>)> {
    match choice {
        PresetChoice::Plain(p) => {
            let alpha = 10f64.powf(t_alpha);
            let (beta, t_b) = if p.two_parameter() {
                let t = t_beta.unwrap_or(t_alpha);
                (10f64.powf(t), Some(t))
            } else {
                (alpha, None)
            };
            let cfg = preset_config(p, sys, alpha, beta)?;
            let op = if p == Preset::Sepss {
                let b = cfg.built.as_ref().expect("preset configs carry their build");
                build_sepss_with(
                    sys,
                    b.alpha,
                    &b.q1,
                    b.beta,
                    &b.q2,
                    SepssOptions { drop_tol },
                )?
            } else {
                build_generic(sys, &cfg)?
            };
            let beta_out = if p.two_parameter() { Some(beta) } else { None };
            Ok((op, alpha, beta_out, t_alpha, t_b))
        }
        PresetChoice::SepssStar | PresetChoice::SepssStarStar => {
            let alpha = 1e-4;
            let (q1, q2) = shift_bases(sys)?;
            let beta = match choice {
                PresetChoice::SepssStar => beta_star(sys, alpha, &q1, &q2)?,
                _ => beta_double_star(sys, &q2)?,
            };
            if !(beta > 0.0) {
                return Err(Error::invalid(
                    "formula produced a degenerate beta (the C block has no skew triangle); sweep beta instead",
                ));
            }
            let op = build_sepss_with(sys, alpha, &q1, beta, &q2, SepssOptions { drop_tol })?;
            Ok((op, alpha, Some(beta), -4.0, Some(beta.log10())))
        }
    }
}

fn solve_with(
    sys: &SaddleSystem,
    op: &EpssOperator,
    b: &[f64],
    config: &BenchConfig,
) -> Result<(Vec<f64>, SolveReport)> {
    let x0 = vec![0.0; sys.order()];
    match config.solver {
        SolverKind::Gmres => gmres(sys, Some(op), b, &x0, &config.opts),
        SolverKind::Fgmres => {
            let mut flex = FixedFlex(op);
            fgmres(sys, &mut flex, b, &x0, &config.opts)
        }
        SolverKind::Stationary => {
            stationary_solve(sys, op, b, &x0, config.opts.rel_tol, config.opts.max_iters)
        }
    }
}

/// Runs one cell; failures come back as a non-converged row, never an error.
pub fn run_cell(
    sys: &SaddleSystem,
    b: &[f64],
    choice: PresetChoice,
    t_alpha: f64,
    t_beta: Option<f64>,
    config: &BenchConfig,
    reference: Option<&[f64]>,
) -> ResultRow {
    let build_start = Instant::now();
    let built = build_choice(sys, choice, t_alpha, t_beta, config.sepss_drop_tol);
    let build_s = build_start.elapsed().as_secs_f64();
    match built {
        Err(e) => ResultRow {
            preset: choice.label(),
            t_alpha,
            t_beta: if choice.sweeps_beta() { t_beta } else { None },
            alpha: 10f64.powf(t_alpha),
            beta: None,
            iterations: 0,
            cpu_s: build_s,
            build_s,
            solve_s: 0.0,
            residual: 1.0,
            error: None,
            converged: false,
            failure: Some(e.to_string()),
        },
        Ok((op, alpha, beta, t_a, t_b)) => {
            let solved = solve_with(sys, &op, b, config);
            match solved {
                Err(e) => ResultRow {
                    preset: choice.label(),
                    t_alpha: t_a,
                    t_beta: t_b,
                    alpha,
                    beta,
                    iterations: 0,
                    cpu_s: build_s,
                    build_s,
                    solve_s: 0.0,
                    residual: 1.0,
                    error: None,
                    converged: false,
                    failure: Some(e.to_string()),
                },
                Ok((u, rep)) => {
                    let error = reference.map(|r| {
                        let denom = norm2(r).max(f64::MIN_POSITIVE);
                        norm2(&sub(r, &u)) / denom
                    });
                    ResultRow {
                        preset: choice.label(),
                        t_alpha: t_a,
                        t_beta: t_b,
                        alpha,
                        beta,
                        iterations: rep.iterations,
                        cpu_s: build_s + rep.wall_seconds,
                        build_s,
                        solve_s: rep.wall_seconds,
                        residual: rep.final_relative_residual,
                        error,
                        converged: rep.converged,
                        failure: None,
                    }
                }
            }
        }
    }
}

/// A parameter study over preset choices and exponent grids.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub t_alpha: SweepRange,
    pub t_beta: SweepRange,
    pub presets: Vec<PresetChoice>,
    pub config: BenchConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    /// Best cell per preset: fewest iterations among converged cells, ties
    /// broken by CPU; falls back to the smallest residual when nothing
    /// converged.
    pub best: Vec<ResultRow>,
}

/// Worker pool sized by the EPSS_WORKERS environment variable, defaulting to
/// the available parallelism.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("EPSS_WORKERS") {
        let k: usize = raw
            .parse()
            .map_err(|_| Error::invalid(format!("EPSS_WORKERS must be a positive integer, got '{raw}'")))?;
        if k == 0 {
            return Err(Error::invalid("EPSS_WORKERS must be a positive integer"));
        }
        builder = builder.num_threads(k);
    }
    builder.build().map_err(|e| Error::invalid(format!("worker pool construction failed: {e}")))
}

pub fn run_sweep(
    sys: &SaddleSystem,
    b: &[f64],
    spec: &SweepSpec,
    reference: Option<&[f64]>,
) -> Result<SweepOutcome> {
    use rayon::prelude::*;

    let mut cells: Vec<(usize, PresetChoice, f64, Option<f64>)> = Vec::new();
    for (pi, &choice) in spec.presets.iter().enumerate() {
        if choice.is_fixed_parameter() {
            cells.push((pi, choice, -4.0, None));
        } else if choice.sweeps_beta() {
            for &ta in &spec.t_alpha.values() {
                for &tb in &spec.t_beta.values() {
                    cells.push((pi, choice, ta, Some(tb)));
                }
            }
        } else {
            for &ta in &spec.t_alpha.values() {
                cells.push((pi, choice, ta, None));
            }
        }
    }

    let pool = worker_pool()?;
    let mut rows: Vec<(usize, ResultRow)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(pi, choice, ta, tb)| {
                (pi, run_cell(sys, b, choice, ta, tb, &spec.config, reference))
            })
            .collect()
    });
    // deterministic report order regardless of scheduling
    rows.sort_by(|a, b| {
        (a.0, a.1.t_alpha, a.1.t_beta.unwrap_or(f64::NEG_INFINITY))
            .partial_cmp(&(b.0, b.1.t_alpha, b.1.t_beta.unwrap_or(f64::NEG_INFINITY)))
            .expect("exponents are finite")
    });

    let mut best = Vec::new();
    for (pi, _) in spec.presets.iter().enumerate() {
        let group: Vec<&ResultRow> =
            rows.iter().filter(|(gi, _)| *gi == pi).map(|(_, r)| r).collect();
        if group.is_empty() {
            continue;
        }
        let winner = group
            .iter()
            .filter(|r| r.converged)
            .min_by(|a, b| {
                (a.iterations, a.cpu_s)
                    .partial_cmp(&(b.iterations, b.cpu_s))
                    .expect("timings are finite")
            })
            .or_else(|| {
                group.iter().min_by(|a, b| {
                    a.residual.partial_cmp(&b.residual).expect("residuals are comparable")
                })
            })
            .expect("group is nonempty");
        best.push((*winner).clone());
    }

    Ok(SweepOutcome { rows: rows.into_iter().map(|(_, r)| r).collect(), best })
}

fn fmt_opt(v: &Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with a header row; floats use the shortest representation that parses
/// back to the same bits.
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(
        "preset,t_alpha,t_beta,alpha,beta,iterations,cpu_s,build_s,solve_s,residual,error,converged\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.preset,
            r.t_alpha,
            fmt_opt(&r.t_beta),
            r.alpha,
            fmt_opt(&r.beta),
            r.iterations,
            r.cpu_s,
            r.build_s,
            r.solve_s,
            r.residual,
            fmt_opt(&r.error),
            r.converged,
        ));
    }
    out
}

/// Fixed-width table for terminals; numbers keep full precision.
pub fn rows_to_text(rows: &[ResultRow]) -> String {
    let mut out = format!(
        "{:<8} {:>7} {:>7} {:>6} {:>12} {:>12} {:>22} {:>22} {:>5}\n",
        "preset", "t_a", "t_b", "IT", "cpu_s", "build_s", "residual", "error", "ok"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<8} {:>7} {:>7} {:>6} {:>12.6} {:>12.6} {:>22} {:>22} {:>5}\n",
            r.preset,
            r.t_alpha,
            fmt_opt(&r.t_beta),
            r.iterations,
            r.cpu_s,
            r.build_s,
            r.residual,
            fmt_opt(&r.error),
            if r.converged { "yes" } else { "no" },
        ));
        if let Some(f) = &r.failure {
            out.push_str(&format!("         failed: {f}\n"));
        }
    }
    out
}

pub fn sweep_to_json(outcome: &SweepOutcome) -> String {
    serde_json::to_string_pretty(outcome).expect("rows serialize")
}

pub fn row_to_json(row: &ResultRow) -> String {
    serde_json::to_string_pretty(row).expect("row serializes")
}
