// End-to-end runs of the vworkbench binary. The exit-code contract is
// 0 pass, 1 check failure, 2 usage or input error, 3 structural rejection,
// and every test here pins one corner of it.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vworkbench"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    for a in args {
        if let Some(f) = a.strip_prefix("fixture:") {
            cmd.arg(fixture(f));
        } else {
            cmd.arg(a);
        }
    }
    cmd.output().expect("spawn vworkbench")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

// Reports embed wall-clock fields; everything else must reproduce exactly.
fn strip_volatile(v: &mut Value) {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed_ms");
        if let Some(report) = obj.get_mut("report").and_then(Value::as_object_mut) {
            report.remove("trial_ms");
        }
    }
}

#[test]
fn decompose_identity_file_gives_five_factors() {
    let out = run(&["decompose", "fixture:id_element.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["factors"].as_array().map(Vec::len), Some(5));
    assert_eq!(v["input"]["domain"], serde_json::json!([""]));
}

#[test]
fn decompose_seeded_is_byte_identical_across_runs() {
    let a = run(&["decompose", "--seed", "42"]);
    let b = run(&["decompose", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn decompose_seeded_matches_golden_bytes() {
    let out = run(&["decompose", "--seed", "42"]);
    assert_eq!(code(&out), 0);
    let golden = std::fs::read(fixture("decompose_seed42.json")).unwrap();
    assert_eq!(out.stdout, golden, "seed-42 certificate drifted from the checked-in bytes");
}

#[test]
fn decompose_malformed_input_is_a_usage_error() {
    let out = run(&["decompose", "fixture:malformed.json"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty(), "expected a diagnostic on stderr");
}

#[test]
fn decompose_missing_file_is_a_usage_error() {
    let out = run(&["decompose", "fixture:no_such_file.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn audit_single_trial_is_fast_and_passes() {
    let t0 = Instant::now();
    let out = run(&["audit", "--trials", "1", "--seed", "11"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(t0.elapsed().as_secs() < 5, "single-trial audit took {:?}", t0.elapsed());
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "vworkbench.report/1");
    assert_eq!(v["report"]["passed"], Value::Bool(true));
    assert_eq!(v["report"]["N"], 5);
    assert_eq!(v["config"]["seed"], 11);
}

#[test]
fn audit_repeats_identically_for_a_fixed_seed() {
    let a = run(&["audit", "--trials", "3", "--seed", "9"]);
    let b = run(&["audit", "--trials", "3", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    let (mut va, mut vb) = (stdout_json(&a), stdout_json(&b));
    strip_volatile(&mut va);
    strip_volatile(&mut vb);
    assert_eq!(va, vb);
}

#[test]
fn verify_line_model_passes() {
    let out = run(&["verify", "2.9", "--trials", "40"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["violations"], 0);
}

#[test]
fn verify_graph_projection_window_passes() {
    let out = run(&["verify", "2.4", "--trials", "25"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["violations"], 0);
    assert!(v["report"]["eligible"].as_u64().unwrap() > 0);
}

#[test]
fn verify_cube_additivity_passes() {
    let out = run(&["verify", "2.15", "--trials", "4"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["violations"], 0);
}

#[test]
fn verify_unknown_id_is_a_usage_error() {
    let out = run(&["verify", "9.99"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("9.99"), "diagnostic should name the id: {err}");
}

#[test]
fn cube_check_accepts_the_square() {
    let out = run(&["cube", "check", "fixture:square.json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["valid"], Value::Bool(true));
    assert_eq!(v["report"]["hyperplanes"], 2);
}

#[test]
fn cube_check_rejects_k23_with_a_witness() {
    let out = run(&["cube", "check", "fixture:k23.json"]);
    assert_eq!(code(&out), 3);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["valid"], Value::Bool(false));
    assert_eq!(v["report"]["witness"]["triple"], serde_json::json!([2, 3, 4]));
    assert_eq!(v["report"]["witness"]["medians"], 2);
}

#[test]
fn cube_ultrafilters_count_the_square_vertices() {
    let out = run(&["cube", "ultrafilters", "fixture:square.json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["count"], 4);
}

#[test]
fn cube_deltal_on_the_three_cube_antipodes() {
    let out = run(&["cube", "deltaL", "fixture:q3.json", "--level", "0"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    // Default pair selection lands on the lexicographically first diameter
    // pair, which for the 3-cube is the antipodal (0, 7).
    assert_eq!(v["report"]["x"], 0);
    assert_eq!(v["report"]["y"], 7);
    assert_eq!(v["report"]["graph_distance"], 3);
    assert_eq!(v["report"]["delta_l"], 1);
}

#[test]
fn cube_deltal_with_explicit_pair() {
    let out = run(&["cube", "deltaL", "fixture:q3.json", "--level", "2", "--x", "1", "--y", "6"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["x"], 1);
    assert_eq!(v["report"]["y"], 6);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join(format!("vworkbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    let out = run(&["cube", "check", "fixture:square.json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "report should go to the file, not stdout");
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["valid"], Value::Bool(true));
    std::fs::remove_dir_all(&dir).ok();
}
