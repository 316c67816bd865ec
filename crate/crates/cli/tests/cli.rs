use std::path::Path;
use std::process::{Command, Output};

fn liegen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liegen")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn build_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let o = liegen(args);
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.join(name);
    std::fs::write(&path, stdout(&o)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn build_catalog_entry() {
    let o = liegen(&["build", "--id", "7.623", "--p", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["weights"].as_array().unwrap().len(), 7);
    assert_eq!(stderr(&o).trim(), "order 5^7, class 6, p-class 6, characteristic 5");

    let o = liegen(&["build", "--id", "7.650", "--p", "5", "--x", "3"]);
    assert!(o.status.success());
    assert!(stderr(&o).starts_with("order 5^7, class 6"));
}

#[test]
fn build_presentation() {
    let o = liegen(&["build", "--pres", "<a,b|ba,pa,pb,class 1>", "--p", "5"]);
    assert!(o.status.success());
    assert!(stderr(&o).starts_with("order 5^2, class 1"));
}

#[test]
fn build_exit_codes() {
    assert_eq!(liegen(&["build", "--pres", "<a,b|bab", "--p", "5"]).status.code(), Some(1));
    assert_eq!(liegen(&["build", "--id", "7.999", "--p", "5"]).status.code(), Some(1));
    assert_eq!(liegen(&["build", "--id", "7.650", "--p", "5"]).status.code(), Some(1));
    assert_eq!(liegen(&["build", "--pres", "<a,b|ba-a>", "--p", "5"]).status.code(), Some(2));
}

#[test]
fn classify_gate() {
    let o = liegen(&["classify", "--p", "5", "--full-crossval", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total"], 816);
    assert_eq!(v["match"], true);
    assert_eq!(v["cross_validation"]["ok"], true);
    assert_eq!(v["cross_validation"]["matched"], 816);

    let o = liegen(&["classify", "--p", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not prime"));
    assert!(!liegen(&["classify", "--p", "3"]).status.success());
}

#[test]
fn emit_db_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for f in [&a, &b] {
        let o = liegen(&["emit-db", "--p", "5", "--out", f.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let lines: Vec<&str> = std::str::from_utf8(&text).unwrap().lines().collect();
    assert_eq!(lines.len(), 816);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["library_name"], "7.623-d1");

    let o = liegen(&["emit-db", "--p", "5", "--format", "text"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 816);
    assert!(out.lines().nth(2).unwrap().ends_with("(x=1)"));
}

#[test]
fn iso_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let x1 = build_to(d, "x1.json", &["build", "--id", "7.623-d3", "--p", "5", "--x", "1"]);
    let x2 = build_to(d, "x2.json", &["build", "--id", "7.623-d3", "--p", "5", "--x", "2"]);
    let x4 = build_to(d, "x4.json", &["build", "--id", "7.623-d3", "--p", "5", "--x", "4"]);

    let o = liegen(&["iso", &x1, &x1]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("isomorphic\n"));
    let w: serde_json::Value = serde_json::from_str(out.lines().nth(1).unwrap()).unwrap();
    assert_eq!(w["images"][0], serde_json::json!([1, 0, 0, 0, 0, 0, 0, 0]));

    assert_eq!(liegen(&["iso", &x1, &x4]).status.code(), Some(0));
    let o = liegen(&["iso", &x1, &x2]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("non-isomorphic"));

    let o = Command::new(env!("CARGO_BIN_EXE_liegen"))
        .args(["iso", &x1, &x4])
        .env("LIERING_BUDGET_MS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    let missing = d.join("nope.json");
    assert_eq!(liegen(&["iso", &x1, missing.to_str().unwrap()]).status.code(), Some(4));
}
