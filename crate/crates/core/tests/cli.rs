use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn ilaws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilaws")).args(args).output().expect("spawn ilaws")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> String {
    p.display().to_string()
}

fn scenario_args(name: &str) -> Vec<String> {
    let dir = fixtures().join("scenarios").join(name);
    let agent = if name == "exceptions" { "runner.json" } else { "machine.json" };
    ["signature.json", "tree.json", agent].iter().map(|f| path(&dir.join(f))).collect()
}

#[test]
fn dual_of_builtin_matches_catalogue() {
    let out = ilaws(&["dual", "reader2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("iso found"));
    assert!(stdout(&ilaws(&["dual", "nelist3"])).contains("nelist(n)"));
    let out = ilaws(&["--json", "dual", "maybe"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["dual"]["shapes"]["elems"].as_array().unwrap().is_empty());
}

#[test]
fn enumerate_counts_and_guards() {
    let out = ilaws(&["enumerate", "reader2", "writer2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "4 interaction laws");
    let out = ilaws(&["enumerate", "maybe", "writer3"]);
    assert_eq!(stdout(&out).trim(), "0 interaction laws");
    assert_eq!(code(&ilaws(&["enumerate", "nelist3", "nelist3", "--limit", "10"])), 3);
}

#[test]
fn size_guard_from_bounds_file() {
    let dir = tempfile::tempdir().unwrap();
    let bounds = dir.path().join("bounds.json");
    fs::write(&bounds, r#"{"size_guard": 10}"#).unwrap();
    let out = ilaws(&["--bounds", &path(&bounds), "enumerate", "nelist3", "nelist3"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("size guard"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{").unwrap();
    assert_eq!(code(&ilaws(&["dual", &path(&bad)])), 2);
    assert_eq!(code(&ilaws(&["dual", "no-such-thing"])), 2);
    assert_eq!(code(&ilaws(&["check", "nosuch", "x"])), 2);
    assert_eq!(code(&ilaws(&["bogus"])), 2);
    let unknown = dir.path().join("bounds.json");
    fs::write(&unknown, r#"{"max_carier": 2}"#).unwrap();
    assert_eq!(code(&ilaws(&["--bounds", &path(&unknown), "dual", "id"])), 2);
}

#[test]
fn tampered_law_fails_with_counterexample() {
    let out = ilaws(&["check", "mcil", &path(&fixtures().join("tampered-update.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL interaction squares"));
    let out = ilaws(&["--json", "check", "mcil", &path(&fixtures().join("tampered-update.json"))]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("counterexample"));
}

#[test]
fn builtin_suites_pass() {
    for (suite, target) in [("mcil", "update"), ("mcil", "reader2"), ("residual", "exceptions"), ("sweedler", "nelist"), ("coequations", "theorem")] {
        let out = ilaws(&["check", suite, target]);
        assert_eq!(code(&out), 0, "{suite} {target}: {}", stdout(&out));
    }
    let out = ilaws(&["check", "runner", &path(&fixtures().join("reader-signature.json")), &path(&fixtures().join("reader-runner.json"))]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn scenarios_give_documented_results() {
    for (name, result) in [("reader", "(right, used)"), ("update", "(x1, a1)"), ("exceptions", r#"{"raise":"aborted"}"#)] {
        let args = scenario_args(name);
        let mut full = vec!["run"];
        full.extend(args.iter().map(String::as_str));
        let out = ilaws(&full);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains(result), "{name}: {}", stdout(&out));
    }
}

#[test]
fn golden_written_then_compared() {
    let dir = tempfile::tempdir().unwrap();
    let golden = path(dir.path());
    let args = scenario_args("update");
    let mut full = vec!["--golden", &golden, "run"];
    full.extend(args.iter().map(String::as_str));
    assert_eq!(code(&ilaws(&full)), 0);
    let file = dir.path().join("run-update-tree.json");
    let written = fs::read_to_string(&file).unwrap();
    assert_eq!(written, fs::read_to_string(fixtures().join("golden").join("run-update-tree.json")).unwrap());
    assert_eq!(code(&ilaws(&full)), 0);
    fs::write(&file, written.replace("x1", "x0")).unwrap();
    assert_eq!(code(&ilaws(&full)), 1);
}
