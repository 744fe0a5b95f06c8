use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn freezeml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freezeml")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn std_prelude() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/std.fml").display().to_string()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn frozen_identity() {
    let o = freezeml(&["infer", "-e", "id ~id", "--prelude", &std_prelude()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "forall a. a -> a");
}

#[test]
fn frozen_application_is_a_type_error() {
    let o = freezeml(&["infer", "-e", "~id 3", "--prelude", &std_prelude()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("quantifier mismatch"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn monomorphic_residual() {
    let o = freezeml(&["infer", "-e", "let x = id id in x"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "_1 -> _1  where _1 is monomorphic");
}

#[test]
fn parse_errors_exit_2() {
    let o = freezeml(&["infer", "-e", "fun (x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"));
}

#[test]
fn unbound_variables_are_type_errors() {
    let o = freezeml(&["infer", "-e", "nope 1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nope"));
}

#[test]
fn json_reports_round_trip() {
    let o = freezeml(&["infer", "-e", "fun x -> x", "--json", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["type"], "_1 -> _1  where _1 is monomorphic");
    assert_eq!(v["residuals"][0]["name"], "_1");
    assert_eq!(v["residuals"][0]["restriction"], "monomorphic");
    assert!(v["error"].is_null());
    let trace = v["trace"].as_array().unwrap();
    assert!(trace[0].as_str().unwrap().starts_with("step=1 rule="));

    let o = freezeml(&["infer", "-e", "fun f -> f f", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "type-error");
    assert!(v["type"].is_null());
    assert!(v["error"]["message"].as_str().unwrap().contains("type error"));

    let o = freezeml(&["infer", "-e", "let =", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "parse-error");
    assert_eq!(v["error"]["line"], 1);
}

#[test]
fn trace_and_constraint_output() {
    let o = freezeml(&["infer", "-e", "id 1", "--trace", "--constraint"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("constraint: "));
    assert!(lines[1].starts_with("step=1 rule=S-ExistsPush stack=1 measure=("));
    assert_eq!(*lines.last().unwrap(), "Int");
}

#[test]
fn files_with_declarations() {
    let path = scratch("decls.fml", "val twice : forall a. (a -> a) -> a -> a\ntwice inc\n");
    let o = freezeml(&["infer", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "Int -> Int");
}

#[test]
fn custom_prelude_replaces_the_default() {
    let path = scratch("tiny.fml", "val k : forall a b. a -> b -> a\n");
    let p = path.to_str().unwrap();
    let o = freezeml(&["infer", "-e", "k ~k", "--prelude", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "_1 -> forall a b. a -> b -> a");
    let o = freezeml(&["infer", "-e", "id", "--prelude", p]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_preludes_are_parse_errors() {
    let path = scratch("bad.fml", "val f : a -> a\n");
    let o = freezeml(&["infer", "-e", "f", "--prelude", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = freezeml(&["infer", "-e", "1", "--prelude", "/nonexistent/prelude.fml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = freezeml(&["selftest", "--seed", "42", "--count", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("soundness 0 failures"));
    let o = freezeml(&["selftest", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
}
