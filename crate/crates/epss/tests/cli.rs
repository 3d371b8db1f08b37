//! End-to-end checks of the command-line harness: every subcommand through a
//! real process spawn, exit codes, output formats, settings-file merging.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_epss"))
}

fn run_args(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn epss binary")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const SYNTH: &[&str] = &[
    "--kind",
    "synthetic",
    "--n",
    "14",
    "--m",
    "5",
    "--rank-b",
    "4",
    "--null-dim",
    "1",
    "--seed",
    "42",
];

#[test]
fn gen_writes_blocks_and_manifest_and_run_reads_them_back() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();

    let mut args = vec!["gen"];
    args.extend_from_slice(SYNTH);
    args.extend_from_slice(&["--out", out_dir, "--stem", "case"]);
    let gen = run_args(&args);
    assert_eq!(code(&gen), 0, "gen failed: {}", stderr_of(&gen));

    for name in ["case.json", "case.a.mtx", "case.b.mtx", "case.c.mtx"] {
        assert!(dir.path().join(name).exists(), "missing {name}");
    }

    let manifest = dir.path().join("case.json");
    let run = run_args(&[
        "run",
        "--problem",
        manifest.to_str().unwrap(),
        "--preset",
        "sepss",
        "--talpha",
        "-1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&run), 0, "run failed: {}", stderr_of(&run));
    let row: serde_json::Value = serde_json::from_str(&stdout_of(&run)).expect("json row");
    assert_eq!(row["preset"], "sepss");
    assert_eq!(row["converged"], true);
    assert!(row["iterations"].as_u64().unwrap() >= 1);
    assert!(row["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn run_emits_csv_and_text_and_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();

    let mut args = vec!["run"];
    args.extend_from_slice(SYNTH);
    args.extend_from_slice(&["--preset", "pss", "--talpha", "-0.5", "--format", "csv"]);
    let csv = run_args(&args);
    assert_eq!(code(&csv), 0);
    let text = stdout_of(&csv);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("preset,t_alpha,t_beta,"));
    assert_eq!(text.lines().count(), 2);

    let out_path = dir.path().join("report.txt");
    let mut args = vec!["run"];
    args.extend_from_slice(SYNTH);
    args.extend_from_slice(&[
        "--preset",
        "hss",
        "--talpha",
        "-1",
        "--format",
        "text",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let txt = run_args(&args);
    assert_eq!(code(&txt), 0);
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.contains("preset"));
    assert!(written.contains("hss"));
}

#[test]
fn certify_reports_semi_convergence_on_a_singular_instance() {
    let mut args = vec!["certify"];
    args.extend_from_slice(SYNTH);
    args.extend_from_slice(&["--preset", "sepss", "--talpha", "-1", "--format", "json"]);
    let out = run_args(&args);
    assert_eq!(code(&out), 0, "certify failed: {}", stderr_of(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json report");
    assert_eq!(doc["certified"], true);
    assert_eq!(doc["spectral"]["semi_convergent"], true);
    assert_eq!(doc["spectral"]["index_one"], true);
    assert!(doc["spectral"]["nu"].as_f64().unwrap() < 1.0);
    assert!(doc["spectral"]["stationary_directions"].as_u64().unwrap() >= 1);
}

#[test]
fn sweep_reports_rows_and_a_best_row_per_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.json");

    let mut args = vec!["sweep"];
    args.extend_from_slice(SYNTH);
    args.extend_from_slice(&[
        "--presets",
        "sepss,pss",
        "--talpha",
        "-2:1:0",
        "--tbeta",
        "-2:1:0",
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let out = run_args(&args);
    assert_eq!(code(&out), 0, "sweep failed: {}", stderr_of(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).expect("sweep json");
    let rows = doc["rows"].as_array().unwrap();
    // sepss crosses alpha with beta (3x3), pss ties beta to alpha (3).
    assert_eq!(rows.len(), 12);
    let best = doc["best"].as_array().unwrap();
    assert_eq!(best.len(), 2);
    for row in best {
        assert_eq!(row["converged"], true);
    }
}

#[test]
fn settings_file_fills_in_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("settings.json");
    std::fs::write(
        &cfg_path,
        r#"{
            "kind": "synthetic",
            "n": 14, "m": 5, "rank_b": 4, "null_dim": 1, "seed": 42,
            "preset": "sepss",
            "talpha": "-2",
            "format": "json"
        }"#,
    )
    .unwrap();
    let cfg = cfg_path.to_str().unwrap();

    let from_file = run_args(&["run", "--config", cfg]);
    assert_eq!(code(&from_file), 0, "config run failed: {}", stderr_of(&from_file));
    let row: serde_json::Value = serde_json::from_str(&stdout_of(&from_file)).unwrap();
    assert_eq!(row["t_alpha"].as_f64().unwrap(), -2.0);
    assert_eq!(row["preset"], "sepss");

    let overridden = run_args(&["run", "--config", cfg, "--talpha", "0", "--preset", "gpss"]);
    assert_eq!(code(&overridden), 0);
    let row: serde_json::Value = serde_json::from_str(&stdout_of(&overridden)).unwrap();
    assert_eq!(row["t_alpha"].as_f64().unwrap(), 0.0);
    assert_eq!(row["preset"], "gpss");
}

#[test]
fn formula_chosen_shifts_run_from_the_cli() {
    for preset in ["sepss*", "sepss**"] {
        let mut args = vec!["run"];
        args.extend_from_slice(SYNTH);
        args.extend_from_slice(&["--preset", preset, "--format", "json"]);
        let out = run_args(&args);
        assert_eq!(code(&out), 0, "{preset} failed: {}", stderr_of(&out));
        let row: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(row["converged"], true);
        assert!(row["beta"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn unconverged_solve_exits_with_one() {
    let mut args = vec!["run"];
    args.extend_from_slice(SYNTH);
    args.extend_from_slice(&["--preset", "hss", "--talpha", "3", "--max-iters", "3"]);
    let out = run_args(&args);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let unknown_flag = run_args(&["run", "--no-such-flag"]);
    assert_eq!(code(&unknown_flag), 2);

    let unknown_preset = {
        let mut args = vec!["run"];
        args.extend_from_slice(SYNTH);
        args.extend_from_slice(&["--preset", "frobnicate"]);
        run_args(&args)
    };
    assert_eq!(code(&unknown_preset), 2);
    assert!(stderr_of(&unknown_preset).contains("error"));

    let unknown_kind = run_args(&["run", "--kind", "helmholtz"]);
    assert_eq!(code(&unknown_kind), 2);

    let missing_manifest =
        run_args(&["run", "--problem", "/nonexistent/path/case.json"]);
    assert_eq!(code(&missing_manifest), 2);

    let bad_format = {
        let mut args = vec!["run"];
        args.extend_from_slice(SYNTH);
        args.extend_from_slice(&["--format", "yaml"]);
        run_args(&args)
    };
    assert_eq!(code(&bad_format), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad_cfg = dir.path().join("broken.json");
    std::fs::write(&bad_cfg, "{ not json").unwrap();
    let broken_settings = run_args(&["run", "--config", bad_cfg.to_str().unwrap()]);
    assert_eq!(code(&broken_settings), 2);

    let unknown_key = dir.path().join("extra.json");
    std::fs::write(&unknown_key, r#"{"kind": "synthetic", "typo_field": 3}"#).unwrap();
    let rejected = run_args(&["run", "--config", unknown_key.to_str().unwrap()]);
    assert_eq!(code(&rejected), 2);
}

#[test]
fn gen_then_certify_through_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();

    let mut args = vec!["gen"];
    args.extend_from_slice(SYNTH);
    args.extend_from_slice(&["--out", out_dir, "--stem", "sing"]);
    assert_eq!(code(&run_args(&args)), 0);

    let manifest = dir.path().join("sing.json");
    let out = run_args(&[
        "certify",
        "--problem",
        manifest.to_str().unwrap(),
        "--preset",
        "gss",
        "--talpha",
        "0",
        "--format",
        "text",
    ]);
    assert_eq!(code(&out), 0, "certify failed: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("semi-convergent          true"));
    assert!(text.contains("certified: true"));
    assert!(Path::new(manifest.to_str().unwrap()).exists());
}
