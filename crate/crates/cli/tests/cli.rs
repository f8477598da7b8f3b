use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use weilmc::serial::{self, Element};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn weilmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilmc")).args(args).env_remove("WEILMC_CUTOFF").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn solve_su2_file_verifies() {
    let o = weilmc(&["solve", "--lie", &data("su2.json"), "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["f"]["text"], "(v3) ⊗ e1^e2 + ((-1)*v2) ⊗ e1^e3 + (v1) ⊗ e2^e3");
    assert_eq!(v["z"]["text"], "(v1^2 + v2^2 + v3^2) ⊗ e1^e2^e3");
    assert_eq!(v["p"][0]["text"], "(v1^2 + v2^2 + v3^2)");
    assert_eq!(v["casimir_trace"], "-6");
    assert_eq!(v["status"], "pass");
}

#[test]
fn emitted_solution_round_trips() {
    let dir = std::env::temp_dir().join(format!("weilmc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.json");
    let o = weilmc(&["solve", "--lie", "su2+su2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let Element::Mixed(f) = serial::from_json(&written, None).unwrap() else { panic!("expected a mixed element") };
    let printed = &json(&o)["f"];
    assert_eq!(serial::from_json(printed, None).unwrap(), Element::Mixed(f.clone()));
    assert_eq!(serial::mixed_to_json(&f), written);
}

#[test]
fn selftest_abelian_passes() {
    let o = weilmc(&["selftest", "--lie", "abelian:3", "--seed", "1", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let certs = json(&o)["reports"][0]["certificates"].as_array().unwrap().len();
    assert_eq!(certs, 8);
}

#[test]
fn broken_jacobi_is_an_input_error() {
    let o = weilmc(&["solve", "--lie", &data("broken.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("jacobi") && err.contains("(1,2,3)"), "{err}");
    let o = weilmc(&["validate", "--lie", &data("broken.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(weilmc(&["--cutoff", "1", "solve", "--lie", "su2"]).status.code(), Some(2));
    assert_eq!(weilmc(&["solve", "--lie", "so5"]).status.code(), Some(2));
    assert_eq!(weilmc(&["check", "--lie", "su2", "--what", "fun1"]).status.code(), Some(2));
    let o = weilmc(&["relative", "--lie-g", "su2", "--lie-h", "su2", "--phi", &data("diag_su2.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("diag_su2.json"));
}

#[test]
fn env_cutoff_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_weilmc"))
        .args(["cohomology", "--lie", "su2", "--model", "big"])
        .env("WEILMC_CUTOFF", "3")
        .output()
        .unwrap();
    assert_eq!(json(&o)["cohomology"]["cutoff"], 3);
    let o = Command::new(env!("CARGO_BIN_EXE_weilmc")).args(["exp", "--lie", "su2"]).env("WEILMC_CUTOFF", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn relative_diagonal_su2() {
    let o = weilmc(&["relative", "--lie-g", "su2", "--lie-h", "su2+su2", "--phi", &data("diag_su2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["u_bracket_u"]["terms"].as_array().unwrap().len(), 0);
    assert_eq!(v["u"]["terms"].as_array().unwrap().len(), 9);
}

#[test]
fn reports_are_byte_reproducible() {
    for args in [&["selftest", "--lie", "sl2", "--seed", "9", "--trials", "5"][..], &["transgress", "--lie", "su2", "--cutoff", "3"]] {
        let a = weilmc(args);
        let b = weilmc(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn text_format_lists_certificates() {
    let o = weilmc(&["--format", "text", "check", "--lie", "su2", "--what", "halperin", "--weil-module", "weil:2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.lines().any(|l| l.trim_start().starts_with("PASS")), "{out}");
    assert!(!out.contains("FAIL"));
}
