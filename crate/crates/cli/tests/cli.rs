use std::path::PathBuf;
use std::process::{Command, Output};

fn forcelab(args: &[&str]) -> Output {
    forcelab_with_env(args, None)
}

fn forcelab_with_env(args: &[&str], caps: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_forcelab"));
    cmd.args(args).env_remove("FORCELAB_CAPS");
    if let Some(c) = caps {
        cmd.env("FORCELAB_CAPS", c);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("forcelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn statuses(report: &serde_json::Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["report"]["status"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn verify_small_rank_holds_everywhere() {
    let out = forcelab(&[
        "verify",
        "--rank",
        "3",
        "--poset",
        "v-shape",
        "--suites",
        "names,fundamental",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let s = statuses(&report);
    assert!(!s.is_empty());
    assert!(s.iter().all(|x| x == "HOLDS"), "{s:?}");
    assert_eq!(report["summary"]["violated"], 0);
}

#[test]
fn verify_rejects_oversized_stage() {
    let out = forcelab(&["verify", "--rank", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("stage-too-large"), "{}", stderr(&out));
}

#[test]
fn verify_axioms_reports_unmet_closure_not_violations() {
    let out = forcelab(&["verify", "--rank", "4", "--suites", "axioms"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let s = statuses(&report);
    assert!(s.iter().any(|x| x == "PRECONDITION_UNMET"));
    assert!(!s.iter().any(|x| x == "VIOLATED"));
}

#[test]
fn verify_reports_are_reproducible() {
    let args = [
        "verify",
        "--rank",
        "3",
        "--suites",
        "renaming,recursion",
        "--seed",
        "7",
    ];
    let a = forcelab(&args);
    let b = forcelab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_accepts_poset_and_formula_files() {
    let poset = scratch(
        "chain.json",
        r#"{"elements":[0,1],"le":[[0,1]],"top":1,"auto_reflexive":true}"#,
    );
    let formulas = scratch("phis.txt", "# membership\nMem 0 1\n\nEq 0 1\n");
    let out = forcelab(&[
        "verify",
        "--rank",
        "3",
        "--poset",
        poset.to_str().unwrap(),
        "--formulas",
        formulas.to_str().unwrap(),
        "--suites",
        "fundamental",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("HOLDS"));
    assert!(!stdout(&out).contains("VIOLATED"));
}

#[test]
fn verify_rejects_unknown_suite_and_preset() {
    assert_eq!(
        forcelab(&["verify", "--suites", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        forcelab(&["verify", "--poset", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn forces_membership_in_v_shape() {
    let names = scratch("names.json", "[[],[[1]]]");
    let names = names.to_str().unwrap();
    let yes = forcelab(&[
        "forces", "--rank", "4", "--phi", "Mem 0 1", "--names", names, "--p", "0",
    ]);
    assert_eq!(yes.status.code(), Some(0), "{}", stderr(&yes));
    assert_eq!(stdout(&yes).trim(), "true");

    let no = forcelab(&[
        "forces", "--rank", "4", "--phi", "Mem 0 1", "--names", names, "--p", "2", "--trace",
    ]);
    let text = stdout(&no);
    assert_eq!(text.lines().next(), Some("false"));
    assert!(
        text.contains("G = {1,2}  contains p: true  satisfied: false"),
        "{text}"
    );
}

#[test]
fn forces_tautology_everywhere() {
    let names = scratch("one.json", "[[]]");
    for p in ["0", "1", "2"] {
        let out = forcelab(&[
            "forces",
            "--phi",
            "Eq 0 0",
            "--names",
            names.to_str().unwrap(),
            "--p",
            p,
        ]);
        assert_eq!(stdout(&out).trim(), "true");
    }
}

#[test]
fn forces_rejects_bad_input() {
    assert_eq!(
        forcelab(&["forces", "--phi", "Mem 0", "--p", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        forcelab(&["forces", "--phi", "Eq 0 0", "--p", "7"])
            .status
            .code(),
        Some(2)
    );
    // Free index without a name to fill it.
    assert_eq!(
        forcelab(&["forces", "--phi", "Eq 0 0", "--p", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn extension_dump_is_deterministic() {
    let args = [
        "extension",
        "--poset",
        "chain-3",
        "--rank",
        "4",
        "--minimal",
        "0",
    ];
    let a = forcelab(&args);
    let b = forcelab(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let dump: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(dump["ground_rank"], 4);
    assert!(dump["universe_size"].as_u64().unwrap() >= 1);
}

#[test]
fn extension_writes_to_file() {
    let target = scratch("dump.json", "");
    let out = forcelab(&[
        "extension",
        "--rank",
        "3",
        "--minimal",
        "0",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dump: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(dump["generic"], serde_json::json!([0, 2]));
    assert_eq!(dump["universe_size"], 1);
}

#[test]
fn extension_needs_a_minimal_condition() {
    let out = forcelab(&["extension", "--rank", "3", "--minimal", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn caps_exit_with_three() {
    let out = forcelab_with_env(
        &["extension", "--rank", "3", "--minimal", "1"],
        Some("model=3"),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("model-too-large"));
    let bad = forcelab_with_env(&["gen-model", "--rank", "2"], Some("oops"));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gen_model_prints_the_stage() {
    let out = forcelab(&["gen-model", "--rank", "2"]);
    assert_eq!(stdout(&out).trim(), "[[],[[]]]");
    let v3: Vec<serde_json::Value> =
        serde_json::from_str(&stdout(&forcelab(&["gen-model", "--rank", "3"]))).unwrap();
    assert_eq!(v3.len(), 4);
}
