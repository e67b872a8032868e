use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_presburger"))
        .args(args)
        .env_remove("PRESBURGER_BUDGET_NODES")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.trim().lines().count(), 1, "one JSON line, got {stdout:?}");
    let v: Value = serde_json::from_str(stdout.trim()).expect("stdout is JSON");
    for key in ["status", "payload", "diagnostics"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    (out.status.code().unwrap(), v)
}

#[test]
fn decide_reports_value() {
    let (code, v) = json(&["decide", "forall x. exists y. y = x + x"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"], serde_json::json!({"value": true}));
    let (_, v) = json(&["decide", "forall x. exists y. x = y + y"]);
    assert_eq!(v["payload"]["value"], false);
}

#[test]
fn rank_of_lex_square() {
    let (code, v) = json(&["rank", "catalog:lex_omega2"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["rank"], 2);
}

#[test]
fn qe_and_decompose() {
    let out = run(&["qe", "exists y. x = y + y"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!String::from_utf8(out.stdout).unwrap().contains("exists"));
    let (code, v) = json(&["decompose", "x <= y", "--box", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["dimension"], 2);
    assert_eq!(v["payload"]["points"].as_array().unwrap().len(), 6);
    let (_, v) = json(&["dim", "x = 2*y"]);
    assert_eq!(v["payload"]["dimension"], 1);
}

#[test]
fn galaxy_and_condense() {
    let (_, v) = json(&["galaxy", "catalog:growing_boxes", "--point", "3,1"]);
    assert_eq!(v["payload"]["tag"], "Finite(4)");
    let (_, v) = json(&["galaxy", "catalog:zeta", "--point", "0"]);
    assert_eq!(v["payload"]["tag"], "Z");
    let (code, v) = json(&["condense", "catalog:omega_plus_omega_star", "--box", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["points"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_exit_codes() {
    let (code, v) = json(&["validate", "catalog:zeta"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    let dir = std::env::temp_dir().join(format!("presburger-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    let broken = presburger::orderanalysis::catalog::broken();
    std::fs::write(&bad, broken.to_json().to_string()).unwrap();
    let (code, v) = json(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    let (code, v) = json(&["validate", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());
    std::fs::write(&bad, "{\"dim\": 1}").unwrap();
    let (code, _) = json(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _) = json(&["validate", "catalog:no_such_entry"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors() {
    let out = run(&["decide", "--frobnicate", "true"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
    let (code, _) = json(&["decide", "exists x. x +"]);
    assert_eq!(code, 2);
    let (code, _) = json(&["decide", "x = 1"]);
    assert_eq!(code, 2);
}

#[test]
fn budgets_from_flag_and_env() {
    let f = "forall x. forall y. exists z. (x + y = z + z | x + y = z + z + 1) & z <= x + y";
    let (code, v) = json(&["--budget-nodes", "3", "decide", f]);
    assert_eq!(code, 2, "{v}");
    let out = Command::new(env!("CARGO_BIN_EXE_presburger"))
        .args(["--json", "decide", f])
        .env("PRESBURGER_BUDGET_NODES", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let (code, v) = json(&["decide", f]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["value"], true);
}

#[test]
fn catalog_and_counting() {
    let (_, v) = json(&["catalog", "list"]);
    assert!(v["payload"]["names"].as_array().unwrap().iter().any(|n| n == "growing_boxes"));
    let (code, v) = json(&["catalog", "get", "omega"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["interpretation"]["dim"], 1);
    let (_, v) = json(&["count", "-A", "1,1", "-u", "5"]);
    assert_eq!(v["payload"]["count"], 6);
    let (_, v) = json(&["count", "-A", "1,-1", "-u", "0"]);
    assert_eq!(v["payload"]["count"], "infinite");
    let (code, v) = json(&["count", "fit", "-A", "1,1", "--range", "0:10"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["degree_bound_holds"], true);
}

#[test]
fn lexrep_build_and_verify() {
    let (code, v) = json(&["lexrep", "build", "catalog:lex_omega2", "--prefix", "60"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["verification"]["passed"], true);
    let path = std::env::temp_dir().join(format!("presburger-rep-{}.json", std::process::id()));
    std::fs::write(&path, v["payload"]["representation"].to_string()).unwrap();
    let (code, _) = json(&["lexrep", "verify", "catalog:lex_omega2", path.to_str().unwrap(), "--prefix", "60"]);
    assert_eq!(code, 0);
    let (code, v) = json(&["lexrep", "verify", "catalog:omega", path.to_str().unwrap(), "--prefix", "60"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["verification"]["passed"], false);
}
