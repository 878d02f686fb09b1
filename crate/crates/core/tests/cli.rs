use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

mod common;

const BIN: &str = env!("CARGO_BIN_EXE_gerbe-dual");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_on(cmd: &str, path: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn load(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(common::fixture_path(name)).unwrap()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, doc: &Value) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    p
}

fn json_report(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

#[test]
fn every_fixture_checks_clean() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut names: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    assert!(names.len() >= 13);
    for p in names {
        let o = run_on("check", &p, &[]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", p.display(), stdout(&o));
        assert!(stdout(&o).contains("result: pass"));
    }
}

#[test]
fn broken_tau_names_the_failing_triple() {
    let mut doc = load("s3");
    doc["tau"][1][1] = Value::from(1);
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "bad_tau.json", &doc);
    let o = run_on("validate", &p, &[]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("FAIL instance-valid"), "{out}");
    assert!(out.contains("(1, 1, 1)"), "{out}");
}

#[test]
fn malformed_json_reports_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\n  \"kind\": \"group\",\n  \"version\": 1,\n  \"g\": [[0]\n").unwrap();
    let o = run_on("validate", &p, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line ") && err.contains("column "), "{err}");
}

#[test]
fn missing_file_is_an_error() {
    let o = run(&["check", "/nonexistent/instance.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn corrupted_cocycle_value_fails_morita_with_certificate() {
    let mut doc = load("s3");
    doc["t"][1][2] = serde_json::json!({ "turns": "1/8" });
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "bad_t.json", &doc);
    let o = run_on("check", &p, &["--suite", "morita", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json_report(&o);
    let verdicts = r["verdicts"].as_array().unwrap();
    let morita = verdicts.iter().find(|v| v["name"] == "morita").expect("morita verdict");
    assert_eq!(morita["pass"], false);
    assert!(!morita["certificate"].as_str().unwrap().is_empty());
}

#[test]
fn empty_or_unknown_suite_is_a_usage_error() {
    let p = common::fixture_path("s3");
    for suite in ["", "nonsense", "morita,"] {
        let o = run_on("check", &p, &["--suite", suite]);
        assert_eq!(o.status.code(), Some(2), "suite {suite:?}: {}", stdout(&o));
    }
}

#[test]
fn suite_selection_limits_the_verdicts() {
    let p = common::fixture_path("klein_swap");
    let o = run_on("check", &p, &["--suite", "functors", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json_report(&o);
    let names: Vec<&str> = r["verdicts"].as_array().unwrap().iter().map(|v| v["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"T-after-S") && !names.contains(&"morita"), "{names:?}");
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn reports_are_deterministic() {
    for name in ["s3", "pair_z2"] {
        let p = common::fixture_path(name);
        let a = json_report(&run_on("check", &p, &["--format", "json", "--seed", "5"]));
        let b = json_report(&run_on("check", &p, &["--format", "json", "--seed", "5"]));
        assert_eq!(strip_timings(a), strip_timings(b));
    }
}

#[test]
fn g_trivial_dual_carries_the_input_cocycle() {
    let p = common::fixture_path("g_trivial_klein");
    let r = json_report(&run_on("dual", &p, &["--format", "json"]));
    let t = &load("g_trivial_klein")["t"];
    let c = r["dual"]["c"].as_array().unwrap();
    assert_eq!(c.len(), 16);
    for e in c {
        let (q1, q2) = (e["q1"].as_u64().unwrap() as usize, e["q2"].as_u64().unwrap() as usize);
        assert_eq!(e["value"], t[q1][q2], "c({q1},{q2})");
    }
}

#[test]
fn s3_dual_has_two_orbits() {
    let r = json_report(&run_on("dual", &common::fixture_path("s3"), &["--format", "json"]));
    let mut sizes: Vec<usize> = r["dual"]["orbits"].as_array().unwrap().iter().map(|o| o["points"].as_array().unwrap().len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 2]);
}

#[test]
fn klein_twisted_dual_is_one_two_dimensional_point() {
    let r = json_report(&run_on("dual", &common::fixture_path("klein_twisted"), &["--format", "json"]));
    let pts = r["dual"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0]["dim"], 2);
}

#[test]
fn invariants_report_matching_block_counts() {
    let r = json_report(&run_on("invariants", &common::fixture_path("klein_swap"), &["--format", "json"]));
    let inv = &r["invariants"];
    assert_eq!(inv["blocks_extension"].as_array().unwrap().len(), inv["blocks_dual"].as_array().unwrap().len());
    assert_eq!(inv["center_extension"], inv["center_dual"]);
}
