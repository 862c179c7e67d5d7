use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn affsel(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_affsel"))
        .args(args)
        .env_remove("AFFSEL_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn olsen_text() -> Vec<u8> {
    let out = affsel(&["example", "olsen"], b"");
    assert!(out.status.success());
    out.stdout
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("affsel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn olsen_pipeline_reports_no_global_selection() {
    let out = affsel(&["select-global"], &olsen_text());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["kind"], "selection_outcome");
    assert_eq!(doc["status"], "none_exists");
    assert_eq!(doc["certificate"]["verified"], true);
    assert_eq!(doc["spot_checks"], Value::Array(vec![]));
}

#[test]
fn select_local_prints_the_exact_map() {
    let out = affsel(&["select-local", "-", "--point", "0,0"], &olsen_text());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["map"]["matrix"], serde_json::json!([["-2/3", "1/3"]]));
    assert_eq!(doc["map"]["offset"], serde_json::json!(["1/3"]));
    assert_eq!(doc["shrink_exponent"], 1);
    assert_eq!(doc["verification"]["failures"], 0);
}

#[test]
fn boundary_point_exits_with_code_two() {
    let out = affsel(&["select-local", "--point", "1,0"], &olsen_text());
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not interior"));
    let out = affsel(&["select-local", "--point", "2,0"], &olsen_text());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_with_code_one() {
    let out = affsel(
        &["select-global"],
        br#"{"kind":"graph","n":1,"m":1,"graph_vertices":[["0","1.5"]]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("graph_vertices[0][1]"), "{err}");

    assert_eq!(
        affsel(&["select-global"], b"not json").status.code(),
        Some(1)
    );
    assert_eq!(
        affsel(&["select-local", "--point", "0,x"], &olsen_text())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(affsel(&["no-such-command"], b"").status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let text = olsen_text();
    let a = affsel(&["select-local", "--point", "1/4,-1/8"], &text);
    let b = affsel(&["select-local", "--point", "1/4,-1/8"], &text);
    assert_eq!(a.stdout, b.stdout);
    let a = affsel(&["example", "random", "--seed", "3"], b"");
    let b = affsel(&["example", "random", "--seed", "3"], b"");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let flag = affsel(&["example", "random", "--seed", "5"], b"");
    let env = Command::new(env!("CARGO_BIN_EXE_affsel"))
        .args(["example", "random"])
        .env("AFFSEL_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn example_out_writes_a_reloadable_file() {
    let path = scratch("hb.json");
    let out = affsel(
        &["example", "hahn-banach", "--out", path.to_str().unwrap()],
        b"",
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let audit = affsel(&["audit", path.to_str().unwrap()], b"");
    assert_eq!(audit.status.code(), Some(0));
    let doc = json(&audit);
    assert_eq!(doc["convexity"]["passed"], false);
    assert_eq!(
        doc["convexity"]["violations"][0]["witness"],
        serde_json::json!(["1/2", "-1/2"])
    );
}

#[test]
fn verify_checks_a_map_file() {
    let map = scratch("map.json");
    std::fs::write(
        &map,
        r#"{"n":2,"m":1,"matrix":[["-2/3","1/3"]],"offset":["1/3"]}"#,
    )
    .unwrap();
    let out = affsel(
        &["verify", "--map", map.to_str().unwrap(), "--trials", "30"],
        &olsen_text(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["trials"], 30);
    assert_eq!(doc["passed"], false);

    let zero = scratch("zero.json");
    std::fs::write(
        &zero,
        r#"{"n":2,"m":1,"matrix":[["0","0"]],"offset":["1/2"]}"#,
    )
    .unwrap();
    let out = affsel(&["verify", "--map", zero.to_str().unwrap()], &olsen_text());
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn sandwich_subcommand() {
    let doc = br#"{"kind":"sandwich","n":1,
        "lower":[{"point":["-1"],"value":"1"},{"point":["0"],"value":"0"},{"point":["1"],"value":"1"}],
        "upper":[{"point":["-1"],"value":"1"},{"point":["0"],"value":"2"},{"point":["1"],"value":"1"}]}"#;
    let out = affsel(&["sandwich"], doc);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "found");
    assert_eq!(v["map"]["matrix"], serde_json::json!([["0"]]));
    assert_eq!(v["map"]["offset"], serde_json::json!(["1"]));
}

#[test]
fn pretty_adds_an_approximate_rendering() {
    let out = affsel(
        &["--pretty", "select-local", "--point", "0,0"],
        &olsen_text(),
    );
    let doc = json(&out);
    assert_eq!(doc["exact"]["map"]["offset"], serde_json::json!(["1/3"]));
    let approx = doc["approximate_decimal_rendering_not_exact"]["map"]["offset"][0]
        .as_f64()
        .unwrap();
    assert!((approx - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn in_process_runner_matches_the_binary() {
    let text = olsen_text();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = affsel::cli::run(
        ["affsel", "select-global"],
        &mut text.as_slice(),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(out, affsel(&["select-global"], &text).stdout);
}
