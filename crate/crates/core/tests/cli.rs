//! Command-level behavior of `run`, `compare` and `validate`.

use std::fs;
use std::path::Path;

use morphsurf::cli::{
    cmd_compare, cmd_run, cmd_validate, main_with_args, EXIT_INVALID, EXIT_OK, EXIT_TIMEOUT,
};
use morphsurf::constraints::RawGrid;
use morphsurf::io::{self, MetricsDocument};
use morphsurf::ControlMode;
use tempfile::TempDir;

const SMALL: &str = r#"{
  "surface": { "n": 2, "m": 2, "W": 1.0, "L": 1.0, "l": 0.5, "ref": [1, 1] },
  "physics": { "b": 1.0 },
  "control": { "mode": "distributed" },
  "objects": [ { "x": 1.5, "y": 1.5 }, { "x": 1.5, "y": 0.5 } ],
  "t_max": 60.0
}"#;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn validate(path: &Path) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cmd_validate(path, &mut out, &mut err);
    let text = String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap();
    (code, text)
}

fn run_small(dir: &Path) -> (i32, MetricsDocument) {
    let sc = write(dir, "small.json", SMALL);
    let out = dir.join("run");
    let code = cmd_run(&sc, &out, &mut Vec::new(), &mut Vec::new());
    (
        code,
        MetricsDocument::load(&out.join("metrics.json")).unwrap(),
    )
}

/// A feasible S(2, 2) grid: heights 0.2 on the first actuator of each axis.
fn feasible_rows() -> Vec<Vec<f64>> {
    vec![
        vec![0.4, 0.2, 0.2],
        vec![0.2, 0.0, 0.0],
        vec![0.2, 0.0, 0.0],
    ]
}

fn grid_file(dir: &Path, name: &str, rows: Vec<Vec<f64>>) -> std::path::PathBuf {
    let cfg = morphsurf::SurfaceConfig::new(2, 2, 1.0, 1.0, 0.5, (1, 1)).unwrap();
    let mut buf = Vec::new();
    io::write_grid(&RawGrid::from_rows(rows).unwrap(), &cfg, &mut buf).unwrap();
    write(dir, name, std::str::from_utf8(&buf).unwrap())
}

#[test]
fn feasible_grid_validates() {
    let dir = TempDir::new().unwrap();
    let (code, text) = validate(&grid_file(dir.path(), "ok.csv", feasible_rows()));
    assert_eq!(code, EXIT_OK, "{text}");
}

#[test]
fn bumped_corner_is_reported_as_planarity_violation() {
    let dir = TempDir::new().unwrap();
    let mut rows = feasible_rows();
    rows[2][2] += 0.05;
    let (code, text) = validate(&grid_file(dir.path(), "bump.csv", rows));
    assert_eq!(code, EXIT_INVALID);
    assert!(text.contains("planarity  cell (2, 2)"), "{text}");
}

#[test]
fn height_past_stroke_is_reported_as_bound_violation() {
    let dir = TempDir::new().unwrap();
    // Raise a whole actuator row so the surface stays planar.
    let mut rows = feasible_rows();
    for z in &mut rows[0] {
        *z += 0.5 + 0.01 - 0.4;
    }
    let (code, text) = validate(&grid_file(dir.path(), "high.csv", rows));
    assert_eq!(code, EXIT_INVALID);
    assert!(text.contains("bounds     actuator (1, 1)"), "{text}");
    assert!(!text.contains("planarity"), "{text}");
}

#[test]
fn grid_without_metadata_is_rejected() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "bare.csv", "0,0\n0,0\n");
    let (code, text) = validate(&p);
    assert_eq!(code, EXIT_INVALID);
    assert!(text.contains("W="), "{text}");
}

#[test]
fn run_writes_consistent_trace_and_metrics() {
    let dir = TempDir::new().unwrap();
    let (code, doc) = run_small(dir.path());
    assert_eq!(code, EXIT_OK);
    assert!(doc.metrics.converged);
    let trace_path = dir.path().join("run/trace.csv");
    let (layout, trace) = io::load_trace(&trace_path).unwrap();
    assert_eq!((layout.n, layout.m, trace.object_count()), (2, 2, 2));
    assert_eq!(trace.rows.last().unwrap().t, doc.metrics.final_time);
    let (code, text) = validate(&trace_path);
    assert_eq!(code, EXIT_OK, "{text}");
}

#[test]
fn grid_exported_from_a_trace_validates() {
    let dir = TempDir::new().unwrap();
    run_small(dir.path());
    let (_, trace) = io::load_trace(&dir.path().join("run/trace.csv")).unwrap();
    for (k, row) in trace.rows.iter().enumerate().step_by(97) {
        let p = grid_file(
            dir.path(),
            &format!("g{k}.csv"),
            RawGrid::from(&row.grid).rows(),
        );
        let (code, text) = validate(&p);
        assert_eq!(code, EXIT_OK, "row {k}: {text}");
    }
}

#[test]
fn tampered_convergence_time_fails_validation() {
    let dir = TempDir::new().unwrap();
    let (_, mut doc) = run_small(dir.path());
    doc.metrics.convergence_time = doc.metrics.convergence_time.map(|t| t + 0.1);
    fs::write(dir.path().join("run/metrics.json"), doc.to_json().unwrap()).unwrap();
    let (code, text) = validate(&dir.path().join("run/trace.csv"));
    assert_eq!(code, EXIT_INVALID);
    assert!(text.contains("mismatch"), "{text}");
}

#[test]
fn short_time_limit_exits_with_timeout() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "short.json", &SMALL.replace("60.0", "0.5"));
    let code = cmd_run(
        &p,
        &dir.path().join("out"),
        &mut Vec::new(),
        &mut Vec::new(),
    );
    assert_eq!(code, EXIT_TIMEOUT);
    let doc = MetricsDocument::load(&dir.path().join("out/metrics.json")).unwrap();
    assert!(!doc.metrics.converged);
}

#[test]
fn bad_split_and_unknown_keys_are_invalid_input() {
    let dir = TempDir::new().unwrap();
    let split = SMALL.replace(r#""mode": "distributed""#, r#""mode": "wave", "a": 0.7"#);
    let typo = SMALL.replace(r#""t_max""#, r#""tmax""#);
    for (name, text, needle) in [
        ("split.json", split, "control.a + control.b"),
        ("typo.json", typo, "tmax"),
    ] {
        let p = write(dir.path(), name, &text);
        let mut err = Vec::new();
        let code = cmd_run(&p, &dir.path().join("x"), &mut Vec::new(), &mut err);
        let err = String::from_utf8(err).unwrap();
        assert_eq!(code, EXIT_INVALID, "{name}");
        assert!(err.contains(needle), "{name}: {err}");
    }
}

#[test]
fn single_mode_single_seed_compare_matches_run() {
    let dir = TempDir::new().unwrap();
    let (_, doc) = run_small(dir.path());
    let sc = dir.path().join("small.json");
    let out = dir.path().join("cmp");
    let code = cmd_compare(
        &sc,
        &[ControlMode::Distributed],
        &[1],
        &out,
        &mut Vec::new(),
        &mut Vec::new(),
    );
    assert_eq!(code, EXIT_OK);
    let entries: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(out.join("distributed.json")).unwrap()).unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(
        entries[0]["convergence_time"].as_f64(),
        doc.metrics.convergence_time
    );
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("mode,runs,converged,failed,median,min,max\n"));
    assert!(summary.contains("distributed,1,1,0,"), "{summary}");
}

#[test]
fn argument_errors_exit_invalid() {
    assert_eq!(main_with_args(["morphsurf", "bogus"]), EXIT_INVALID);
    assert_eq!(
        main_with_args([
            "morphsurf",
            "compare",
            "x.json",
            "--seeds",
            "9..2",
            "-o",
            "/nonexistent"
        ]),
        EXIT_INVALID
    );
    assert_eq!(
        main_with_args(["morphsurf", "validate", "/nonexistent/grid.csv"]),
        EXIT_INVALID
    );
}

#[test]
fn canned_scenarios_parse_and_start_feasible() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for name in ["paper-s5x6.json", "paper-s1x10.json", "uturn.json"] {
        let (code, text) = validate(&dir.join(name));
        assert_eq!(code, EXIT_OK, "{name}: {text}");
    }
}
