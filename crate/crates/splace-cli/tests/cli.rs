//! End-to-end tests of the `splace` binary: every subcommand runs
//! against a small synthetic design and the outputs are checked for
//! determinism and schema.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn splace(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splace"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = splace(args, cwd);
    assert!(
        out.status.success(),
        "splace {args:?} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 stdout")
}

/// Generates the shared small design once per test directory.
fn gen_design(dir: &Path) -> PathBuf {
    ok(
        &[
            "gen-synthetic",
            "--cells",
            "120",
            "--macros",
            "2",
            "--seed",
            "3",
            "--out",
            "design",
            "--name",
            "t",
        ],
        dir,
    );
    dir.join("design/t.aux")
}

const FAST: &[&str] = &["--set", "gp_max_iteration=300"];

#[test]
fn pipeline_is_deterministic_and_reports_metrics() {
    let tmp = tempfile::tempdir().unwrap();
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    for run in ["run1", "run2"] {
        ok(
            &[&["pipeline", "--aux", aux, "--out-dir", run, "--plot"], FAST].concat(),
            tmp.path(),
        );
    }
    let pl1 = fs::read(tmp.path().join("run1/placed.pl")).unwrap();
    let pl2 = fs::read(tmp.path().join("run2/placed.pl")).unwrap();
    assert_eq!(pl1, pl2, "identical config + seed must reproduce the .pl");

    let m1: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("run1/metrics.json")).unwrap())
            .unwrap();
    let m2: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("run2/metrics.json")).unwrap())
            .unwrap();
    assert_eq!(m1["hpwl"], m2["hpwl"]);
    assert_eq!(m1["config_hash"], m2["config_hash"]);
    assert_eq!(m1["schema_version"], 1);
    assert_eq!(m1["converged"], true);
    assert!(m1["overflow"].as_f64().unwrap() <= 0.1 + 1e-12);

    let svg1 = fs::read(tmp.path().join("run1/placement.svg")).unwrap();
    let svg2 = fs::read(tmp.path().join("run2/placement.svg")).unwrap();
    assert_eq!(svg1, svg2, "plot output must be byte-identical");
}

#[test]
fn ablation_flags_reduce_the_flow() {
    let tmp = tempfile::tempdir().unwrap();
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    ok(
        &[
            &[
                "pipeline",
                "--aux",
                aux,
                "--out-dir",
                "flow1",
                "--skip-refine",
                "--skip-schedule",
            ],
            FAST,
        ]
        .concat(),
        tmp.path(),
    );
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("flow1/metrics.json")).unwrap())
            .unwrap();
    assert_eq!(
        m["times"]["refine_s"].as_f64().unwrap(),
        0.0,
        "refine stage must be skipped"
    );
    // schedule model selection is accepted and changes the outcome
    ok(
        &[
            &[
                "pipeline",
                "--aux",
                aux,
                "--out-dir",
                "gauss",
                "--schedule-model",
                "gaussian",
            ],
            FAST,
        ]
        .concat(),
        tmp.path(),
    );
    let g: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("gauss/metrics.json")).unwrap())
            .unwrap();
    assert_ne!(g["config_hash"], m["config_hash"]);
}

#[test]
fn stagewise_commands_chain_together() {
    let tmp = tempfile::tempdir().unwrap();
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    ok(&["init", "--aux", aux, "--out", "init.pl"], tmp.path());
    ok(
        &["refine", "--aux", aux, "--pl", "init.pl", "--out", "refined.pl"],
        tmp.path(),
    );
    let out = ok(
        &[
            &[
                "place", "--aux", aux, "--pl", "refined.pl", "--out", "placed.pl",
            ],
            FAST,
        ]
        .concat(),
        tmp.path(),
    );
    assert!(out.contains("converged true"), "{out}");

    let eval = ok(&["eval", "--aux", aux, "--pl", "placed.pl"], tmp.path());
    let v: serde_json::Value = serde_json::from_str(&eval).unwrap();
    assert!(v["hpwl"].as_f64().unwrap() > 0.0);
    assert!(v["overflow"].as_f64().unwrap() <= 0.1 + 1e-12);
}

#[test]
fn plot_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    ok(&["plot", "--aux", aux, "--out", "a.svg"], tmp.path());
    ok(&["plot", "--aux", aux, "--out", "b.svg"], tmp.path());
    let a = fs::read(tmp.path().join("a.svg")).unwrap();
    let b = fs::read(tmp.path().join("b.svg")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("#d62728") && text.contains("#1f77b4"));
}

#[test]
fn schedule_dump_emits_full_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = ok(
        &["schedule-dump", "--model", "exp", "--horizon", "50"],
        tmp.path(),
    );
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), 52, "header + horizon + 1 rows");
    assert_eq!(lines[0], "t,eta,sigma,k");
    // sigma non-decreasing along the dump
    let sigmas: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(sigmas.windows(2).all(|w| w[1] >= w[0] - 1e-12));
}

#[test]
fn seed_sweep_single_seed_degenerates() {
    let tmp = tempfile::tempdir().unwrap();
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    ok(
        &[
            &[
                "seed-sweep",
                "--aux",
                aux,
                "--seeds",
                "1",
                "--jobs",
                "1",
                "--out-dir",
                "sweep",
            ],
            FAST,
        ]
        .concat(),
        tmp.path(),
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("sweep/seed_sweep.json")).unwrap())
            .unwrap();
    assert_eq!(v["min"], v["max"]);
    assert_eq!(v["min"], v["mean"]);
    assert_eq!(v["range_over_avg"], 0.0);
    let csv = fs::read_to_string(tmp.path().join("sweep/seed_sweep.csv")).unwrap();
    assert_eq!(csv.trim_end().lines().count(), 2);
}

#[test]
fn density_sweep_emits_pairs() {
    let tmp = tempfile::tempdir().unwrap();
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    ok(
        &[
            &[
                "density-sweep",
                "--aux",
                aux,
                "--from",
                "0.8",
                "--to",
                "0.9",
                "--step",
                "0.1",
                "--jobs",
                "1",
                "--out-dir",
                "ds",
            ],
            FAST,
        ]
        .concat(),
        tmp.path(),
    );
    let csv = fs::read_to_string(tmp.path().join("ds/density_sweep.csv")).unwrap();
    // header + (pipeline, baseline) per density
    assert_eq!(csv.trim_end().lines().count(), 1 + 2 * 2, "{csv}");
    assert!(tmp.path().join("ds/density_sweep.svg").exists());
}

#[test]
fn tune_logs_trials_and_front() {
    let tmp = tempfile::tempdir().unwrap();
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    ok(
        &[
            &[
                "tune",
                "--aux",
                aux,
                "--budget",
                "4",
                "--distill-k",
                "2",
                "--out-dir",
                "tune",
            ],
            FAST,
        ]
        .concat(),
        tmp.path(),
    );
    let log = fs::read_to_string(tmp.path().join("tune/trials.jsonl")).unwrap();
    let rows: Vec<serde_json::Value> = log
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 4, "one log line per successful trial");
    for row in &rows {
        assert_eq!(row["objectives"].as_array().unwrap().len(), 3);
    }
    let front: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("tune/front.json")).unwrap())
            .unwrap();
    let front_len = front["front"].as_array().unwrap().len();
    let reps = front["representatives"].as_array().unwrap().len();
    assert!(front_len >= 1);
    assert!(reps <= front_len && reps <= 2);
    let csv = fs::read_to_string(tmp.path().join("tune/front.csv")).unwrap();
    assert_eq!(csv.trim_end().lines().count(), 1 + front_len);
}

#[test]
fn bad_inputs_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = splace(&["eval", "--aux", "missing.aux"], tmp.path());
    assert!(!out.status.success());
    let aux = gen_design(tmp.path());
    let aux = aux.to_str().unwrap();
    let out = splace(
        &["pipeline", "--aux", aux, "--out-dir", "x", "--set", "gamma=-1"],
        tmp.path(),
    );
    assert!(!out.status.success(), "invalid config must be rejected");
}
