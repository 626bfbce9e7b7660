use std::process::{Command, Output};

fn realize(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realize"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("spawn realize")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_i_one_step() {
    let o = realize(&["run", "I * K . pi0", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 3, "{}", s);
    assert!(lines[1].ends_with("[I] K * pi0"));
    assert_eq!(lines[2], "status: Stuck");
}

#[test]
fn run_records_are_json_lines() {
    let o = realize(&["run", "I * K . pi0", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 3);
    assert_eq!(recs[1]["rule"], "I");
    assert_eq!(recs[1]["process"], "K * pi0");
    assert_eq!(recs[2]["status"], "Stuck");
    // deterministic
    assert_eq!(stdout(&o), stdout(&realize(&["run", "I * K . pi0", "--format", "records"])));
}

#[test]
fn omega_cycles_only_with_detection() {
    let w = "((W I) (W I)) * pi0";
    let on = stdout(&realize(&["run", w, "--budget", "100", "--quiet"]));
    assert!(on.contains("Cyclic"), "{}", on);
    let off = stdout(&realize(&["run", w, "--budget", "100", "--quiet", "--cycles", "off"]));
    assert!(off.contains("BudgetExhausted"), "{}", off);
}

#[test]
fn catalogue_y() {
    let o = realize(&["catalogue", "Y"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("ok   Y * xi . pi  >  xi * Y xi . pi"), "{}", s);
    assert!(!s.contains("FAIL"));
}

#[test]
fn catalogue_budget_too_small_fails() {
    let o = realize(&["catalogue", "Y", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn catalogue_list_and_unknown() {
    let o = realize(&["catalogue", "--list", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() >= 20);
    assert_eq!(realize(&["catalogue", "nope"]).status.code(), Some(2));
}

#[test]
fn check_identity() {
    let o = realize(&["check", "tests/data/identity.drv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("I"));
    let o = realize(&[
        "check",
        "tests/data/identity.drv",
        "--smoke",
        "10",
        "--universe",
        "tests/data/universe.toml",
        "--pole",
        "tests/data/pole.toml",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("smoke: unrefuted"));
}

#[test]
fn check_rejects() {
    let o = realize(&["check", "tests/data/bad.drv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("rejected"));
}

#[test]
fn compile_file() {
    let o = realize(&["compile", "tests/data/terms.lam"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(&lines[..2], &["(W (E E))", "(E K)"]);
    let o = realize(&["compile", "tests/data/terms.lam", "--format", "records"]);
    let last: serde_json::Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert_eq!(last["line"], 4);
    assert_eq!(last["free"], serde_json::json!([]));
    assert_eq!(last["compiled"], lines[2]);
}

#[test]
fn encode_decode_roundtrip() {
    let o = realize(&["encode", "((W W) W)"]);
    assert_eq!(stdout(&o).trim(), "17840");
    let o = realize(&["decode", "17840"]);
    assert_eq!(stdout(&o).trim(), "((W W) W)");
    assert_eq!(realize(&["decode", "x"]).status.code(), Some(2));
}

#[test]
fn threads_range() {
    let o = realize(&["threads", "0..3", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 3);
    assert!(recs.iter().all(|r| r["local"] == true));
    let s = stdout(&realize(&["threads", "2728"]));
    assert!(s.contains("Cyclic"), "{}", s);
}

#[test]
fn semantics_query() {
    let o = realize(&["semantics", "tests/data/query.toml", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let recs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 3);
    assert_eq!(recs[2]["realizes"], "Unrefuted");
    assert!(recs[0]["universe"].is_string());
}

#[test]
fn usage_errors() {
    assert_eq!(realize(&["bogus"]).status.code(), Some(2));
    assert_eq!(realize(&["run", "I *"]).status.code(), Some(2));
    assert_eq!(realize(&["check", "tests/data/missing.drv"]).status.code(), Some(2));
    assert_eq!(realize(&["threads", "5..2"]).status.code(), Some(2));
}
