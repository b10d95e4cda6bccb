use std::path::Path;
use std::process::{Command, Output};

fn cnl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn urn_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "ellsberg.cnm");
    assert!(cnl(&["example", "ellsberg", "--out", &model]).status.success());
    let o = cnl(&["check", "--model", &model, "--world", "red", "--formula", "B{a}(Gr|Gy, Gr)"]);
    assert_eq!(stdout(&o), "true\n");
    let o = cnl(&["check", "--model", &model, "--world", "red", "--formula", "B{a}(T, Gr|Gg)"]);
    assert_eq!(stdout(&o), "false\n");
    let o = cnl(&["validate", "--model", &model]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"valid\": true"));
}

#[test]
fn lottery_update_then_knowledge() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "lottery4.cnm");
    let after = path(dir.path(), "after.cnm");
    let o = cnl(&["example", "lottery", "--tickets", "4", "--bought", "1", "--heavy", "5", "--explicit", "--out", &model]);
    assert!(o.status.success());
    let o = cnl(&["update", "--model", &model, "--announce", "win_2", "--mode", "delete", "--out", &after]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cnl(&["check", "--model", &after, "--world", "2", "--formula", "K{a} win_2"]);
    assert_eq!(stdout(&o), "true\n");

    let o = cnl(&["update", "--model", &model, "--announce", "F", "--mode", "delete", "--out", &after]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error: ") && err.lines().count() == 1, "{err}");
}

#[test]
fn weight_lottery_and_cut() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "lottery.wm");
    let cut = path(dir.path(), "cut.wm");
    assert!(cnl(&["example", "lottery", "--tickets", "6", "--bought", "3", "--out", &model]).status.success());
    let o = cnl(&["check", "--model", &model, "--world", "1", "--formula", "B{a}(T, win_3)"]);
    assert_eq!(stdout(&o), "true\n");
    let o = cnl(&["check", "--model", &model, "--world", "1", "--formula", "[win_1] K{a} win_1"]);
    assert_eq!(stdout(&o), "true\n");
    assert!(cnl(&["update", "--model", &model, "--announce", "win_1 | win_2", "--mode", "cut", "--out", &cut]).status.success());
    let o = cnl(&["check", "--model", &cut, "--world", "1", "--formula", "K{a} (win_1 | win_2)"]);
    assert_eq!(stdout(&o), "true\n");
}

#[test]
fn comparison_semantics() {
    let dir = tempfile::tempdir().unwrap();
    let n1 = path(dir.path(), "n1.cmp");
    let n2 = path(dir.path(), "n2.cmp");
    assert!(cnl(&["example", "comparison", "--which", "n1", "--out", &n1]).status.success());
    assert!(cnl(&["example", "comparison", "--which", "n2", "--out", &n2]).status.success());
    let geq = ["--world", "pq", "--formula", "p >={a} q"];
    assert_eq!(stdout(&cnl(&[&["check", "--model", &n1][..], &geq].concat())), "true\n");
    assert_eq!(stdout(&cnl(&[&["check", "--model", &n2][..], &geq].concat())), "false\n");
    let b = ["--world", "none", "--formula", "B{a}(p <-> ~q, p)", "--semantics", "cmp1"];
    assert_eq!(stdout(&cnl(&[&["check", "--model", &n2][..], &b].concat())), "true\n");
    let o = cnl(&["check", "--model", &n2, "--world", "pq", "--formula", "p", "--semantics", "cn"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fuzz_exit_codes() {
    let o = cnl(&["fuzz", "--suite", "cn-axioms", "--trials", "1000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let again = cnl(&["fuzz", "--suite", "cn-axioms", "--trials", "1000", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);
    let o = cnl(&["fuzz", "--suite", "stp-cn-expect-fail", "--trials", "50", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sure-thing/ellsberg"));
    assert_eq!(cnl(&["fuzz", "--suite", "bogus"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cnl(&[]).status.code(), Some(2));
    assert_eq!(cnl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cnl(&["check", "--world", "w"]).status.code(), Some(2));
    assert_eq!(cnl(&["update", "--model", "m", "--announce", "p", "--mode", "sideways", "--out", "o"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let o = cnl(&["parse", "B{a}(p"]);
    assert_eq!(o.status.code(), Some(1));
    let o = cnl(&["validate", "--model", "/nonexistent/model.cnm"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(cnl(&["enumerate-families", "--size", "5"]).status.code(), Some(1));
    assert_eq!(cnl(&["translate", "--dir", "qp2cn", "--formula", "B{a}(p, q)"]).status.code(), Some(1));
    assert_eq!(cnl(&["separation", "--max-depth", "3"]).status.code(), Some(1));
}

#[test]
fn invalid_model_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "bad.cnm");
    let text = stdout(&cnl(&["example", "ellsberg"]));
    let bad = text.replacen("\"red,yellow\": [\n", "\"red,yellow\": [\n          [\"green\"],\n", 1);
    assert_ne!(bad, text);
    std::fs::write(&model, bad).unwrap();
    let o = cnl(&["validate", "--model", &model]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"condition\": \"(c)\""));
}

#[test]
fn parse_translate_and_enumerate() {
    assert_eq!(stdout(&cnl(&["parse", "K{a} p", "--desugar"])), "~B{a}(~p, T)\n");
    assert_eq!(stdout(&cnl(&["parse", "p  &  q"])), "p & q\n");
    assert_eq!(stdout(&cnl(&["translate", "--dir", "qp2cn", "--formula", "p >={a} q"])), "~B{a}(p <-> ~q, q)\n");
    let o = stdout(&cnl(&["enumerate-families", "--size", "3"]));
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["count"], 7);
    assert_eq!(v["families"].as_array().unwrap().len(), 7);
}

#[test]
fn countermodels() {
    assert_eq!(stdout(&cnl(&["find-countermodel", "--formula", "K{a} p -> p", "--max-worlds", "3"])), "valid up to bound 3\n");
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "stp.cnm");
    let f = "B{a}(r | y, r | g) & B{a}(~(r | y), r | g) -> B{a}(T, r | g)";
    let o = cnl(&["find-countermodel", "--formula", f, "--max-worlds", "4", "--out", &model]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let world = v["world"].as_str().unwrap();
    assert_eq!(stdout(&cnl(&["check", "--model", &model, "--world", world, "--formula", f])), "false\n");
    assert_eq!(cnl(&["validate", "--model", &model]).status.code(), Some(0));
}

#[test]
fn separation_report() {
    let o = cnl(&["separation", "--max-depth", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cn_formulas_checked"], 696);
    assert_eq!(v["cn_disagreements"], serde_json::json!([]));
    assert_eq!(v["distinguishing_valid_on_n2"], true);
    assert_eq!(v["distinguishing_valid_on_n1"], false);
}
