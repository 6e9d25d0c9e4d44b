use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn firefight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firefight"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn firefight_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firefight"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_run_and_opt() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tadpole.txt");
    let o = firefight(&["gen", "--family", "tadpole", "--alpha", "10", "--beta", "3", "--sequence", "1,1", "--out", path_str(&file)]);
    assert!(o.status.success(), "{o:?}");
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("version 1\nname tadpole-10-3\nn 14\nroot 0\nsequence 1 1\nedges\n"));

    let o = firefight(&["run", "--instance", path_str(&file), "--alg", "alg-e", "--format", "json-lines"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains(r#""profit":4"#), "{out}");

    let o = firefight(&["opt", "--instance", path_str(&file), "--format", "json-lines"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(r#""value":9"#));

    let o = firefight(&["ratio", "--instance", path_str(&file), "--alg", "alg-c"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(firefight(&["run", "--alg", "alg-z", "--instance", "x"]).status.code(), Some(2));
    assert_eq!(firefight(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(firefight(&["check-lemmas", "--suite", "nope", "--trials", "1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "version 1\nn 3\nroot 0\nsequence 1\nedges\n0 1\n1 two\n").unwrap();
    let o = firefight(&["opt", "--instance", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 7, column 3"));
}

#[test]
fn exhausted_solver_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.txt");
    let o = firefight(&["gen", "--family", "cactus", "--n", "14", "--sequence", "2,2", "--seed", "5", "--out", path_str(&file)]);
    assert!(o.status.success());
    let o = firefight_env(&["opt", "--instance", path_str(&file)], "FIREFIGHT_NODE_BUDGET", "1");
    assert_eq!(o.status.code(), Some(3), "{o:?}");
}

#[test]
fn wrong_class_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("u.txt");
    firefight(&["gen", "--family", "unicyclic", "--n", "8", "--out", path_str(&file)]);
    let o = firefight(&["run", "--instance", path_str(&file), "--alg", "greedy-tree"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_lemmas_reports_each_suite() {
    let dir = tempfile::tempdir().unwrap();
    let o = firefight(&["check-lemmas", "--trials", "30", "--seed", "9", "--out", path_str(dir.path())]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 11);
    assert!(out.lines().all(|l| l.contains(": pass (")));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn adversary_and_table_output() {
    let o = firefight(&["adversary", "--alg", "alg-c", "--beta", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains(r#""bound_met":true"#), "{out}");

    let o = firefight(&["ratio", "--alg", "greedy-tree", "--trials", "5", "--n-max", "8", "--format", "table"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("instance"));
    assert_eq!(out.lines().count(), 6);
}
