//! End-to-end runs of the `webcalc` binary against the bundled corpus files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn webcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_webcalc"))
        .args(args)
        .env("WEBCALC_SEED", "7")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("webcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cup_vector_as_text() {
    let o = webcalc(&["vector", &corpus("cup_n2.json"), "--format", "text"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "x1⊗x2 - q^-1 x2⊗x1");
}

#[test]
fn cup_vector_as_json_parses() {
    let o = webcalc(&["vector", &corpus("cup_n2.json"), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn loop_stranding_count() {
    let o = webcalc(&["strandings", &corpus("loop_n4_k2.json"), "--count"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "6");
}

#[test]
fn small_relation_grid_passes() {
    let o = webcalc(&["relations", "--all", "--max-n", "3"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn validate_and_invariance_on_running_example() {
    let web = corpus("running_example.json");
    assert!(webcalc(&["validate", &web]).status.success());
    let o = webcalc(&["check-invariance", &web]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn base_stranding_matches_bundled_file() {
    let out = scratch("base.json");
    let o = webcalc(&[
        "base-stranding",
        &corpus("running_example.json"),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&out).unwrap();
    let bundled = std::fs::read_to_string(corpus("running_example_stranding.json")).unwrap();
    assert_eq!(written.trim(), bundled.trim());
}

#[test]
fn from_tableau_writes_the_intro_web() {
    let web = scratch("intro.json");
    let strands = scratch("intro_stranding.json");
    let o = webcalc(&[
        "from-tableau",
        "--n",
        "4",
        "--word",
        "12132344",
        "-o",
        web.to_str().unwrap(),
        "--stranding",
        strands.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let written = std::fs::read_to_string(&web).unwrap();
    let bundled = std::fs::read_to_string(corpus("intro_web.json")).unwrap();
    assert_eq!(written.trim(), bundled.trim());
    assert!(Path::new(&strands).exists());
}

#[test]
fn oracle_check_on_programs() {
    assert!(
        webcalc(&["oracle-check", &corpus("running_example_program.json")])
            .status
            .success()
    );
    assert!(webcalc(&["oracle-check", &corpus("intro_program.json")])
        .status
        .success());
    let o = webcalc(&["oracle-check", "--random", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn rank_reports_tableau_count() {
    let o = webcalc(&["rank", "--n", "3", "--m", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "webs 5 rank 5 expected 5");
}

#[test]
fn render_is_deterministic() {
    let a = scratch("a.svg");
    let b = scratch("b.svg");
    for path in [&a, &b] {
        let o = webcalc(&[
            "render",
            &corpus("running_example.json"),
            "-o",
            path.to_str().unwrap(),
            "--stranding",
            &corpus("running_example_stranding.json"),
            "--flows",
            "1,2",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(svg).unwrap().contains("<svg"));
}

#[test]
fn bad_input_exits_with_two() {
    let o = webcalc(&["validate", "/nonexistent/web.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}
