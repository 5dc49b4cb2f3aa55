use std::process::{Command, Output};

use serde_json::Value;

fn pv_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pv-lab")).args(args).env_remove("PV_LAB_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = pv_lab(&all);
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn truncated_diagram_is_a_usage_error_with_column() {
    let o = pv_lab(&["classify", "A3["]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("column 4"), "{err}");
    assert!(err.contains("  A3[\n     ^"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn other_usage_errors_exit_one() {
    for args in [
        vec!["classify", "A3[1,3]", "--mode", "sometimes"],
        vec!["classify", "Q3[1]"],
        vec!["verify-model", "no_such_model:n=2"],
        vec!["subdiagram", "A4[1,3]", "--gamma", "2"],
        vec!["enumerate", "--types", "Z"],
        vec!["frobnicate"],
    ] {
        assert_eq!(pv_lab(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(pv_lab(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_is_deterministic_for_fixed_seed() {
    for args in [
        vec!["--json", "classify", "E6[1,2]", "--seed", "3"],
        vec!["--json", "enumerate", "--types", "A,B", "--max-rank", "4", "--seed", "1"],
        vec!["--json", "verify-model", "skew_chain:p=2,r=3"],
    ] {
        let a = pv_lab(&args);
        let b = pv_lab(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_round_trips() {
    let o = pv_lab(&["--json", "describe", "D9[2,3,5,8]"]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&serde_json::to_string_pretty(&v).unwrap()).unwrap(), v);
    assert!(text.starts_with("{\n  \"schema_version\": \"1\",\n  \"command\""), "{text}");
    assert_eq!(serde_json::from_str::<Value>(&serde_json::to_string(&v).unwrap()).unwrap(), v);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "describe");
    assert_eq!(v["results"]["dim_level_one"], 18);
}

#[test]
fn seed_comes_from_flag_then_environment_then_zero() {
    assert_eq!(json(&["classify", "A3[1,3]"])["inputs"]["seed"], 0);
    let env = |extra: &[&str]| {
        let mut args = vec!["--json", "classify", "A3[1,3]"];
        args.extend_from_slice(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_pv-lab")).args(&args).env("PV_LAB_SEED", "7").output().unwrap();
        serde_json::from_str::<Value>(&stdout(&o)).unwrap()
    };
    assert_eq!(env(&[])["inputs"]["seed"], 7);
    assert_eq!(env(&[])["results"]["seed"], 7);
    assert_eq!(env(&["--seed", "2"])["inputs"]["seed"], 2);
    let bad = Command::new(env!("CARGO_BIN_EXE_pv-lab"))
        .args(["classify", "A3[1,3]"])
        .env("PV_LAB_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn classification_outcomes() {
    let v = json(&["classify", "A3[1,3]"]);
    assert_eq!(v["results"]["verdicts"]["q_irreducible"], true);
    assert_eq!(v["results"]["verdicts"]["n_invariants"], 1);
    let v = json(&["classify", "E6[2,3]", "--mode", "oracle"]);
    assert_eq!(v["results"]["verdicts"]["regular"], false);
    assert_eq!(v["results"]["witnesses"]["nonreductive_isotropy"], true);
}

#[test]
fn disagreement_exits_two() {
    let o = pv_lab(&["--json", "classify", "C6[2,5]"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"]["mismatch"]["oracle"], true);
    assert_eq!(v["results"]["mismatch"]["pattern"], false);
    assert_eq!(pv_lab(&["classify", "C6[2,5]", "--mode", "oracle"]).status.code(), Some(0));
}

#[test]
fn model_verification_exit_codes() {
    assert_eq!(pv_lab(&["verify-model", "bilinear_pairing:n=2"]).status.code(), Some(0));
    let o = pv_lab(&["verify-model", "torus_chain:p=1,q=2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL regular"));
}

#[test]
fn enumerate_lists_families_in_markdown() {
    let o = pv_lab(&["--markdown", "enumerate", "--types", "A", "--max-rank", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let md = stdout(&o);
    assert!(md.contains("| diagram | family | parameters | regular | invariants | Q-irreducible |"), "{md}");
    assert!(md.contains("| A5[1,5] | A | p1=0, p2=3, p3=0 | yes | 1 | yes |"), "{md}");
    let v = json(&["enumerate", "--types", "A", "--max-rank", "5"]);
    assert_eq!(v["results"]["q_irreducible"], serde_json::json!(["A3[1,3]", "A4[1,4]", "A5[1,5]"]));
    assert_eq!(v["results"]["mismatches"], serde_json::json!([]));
}

#[test]
fn quiet_suppresses_output_but_keeps_exit_code() {
    let o = pv_lab(&["--quiet", "verify-model", "torus_chain:p=1,q=2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let o = pv_lab(&["--quiet", "grade", "E8[1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn text_commands() {
    let g = stdout(&pv_lab(&["grade", "E8[1,2]"]));
    assert!(g.contains("total 248 = dim g 248"), "{g}");
    let s = stdout(&pv_lab(&["subdiagram", "D9[2,3,5,8]", "--gamma", "2,8"]));
    assert!(s.contains("A2[2] on ambient nodes [1,2]"), "{s}");
    let d = stdout(&pv_lab(&["decompose", "descending_chains:n=2"]));
    assert!(d.contains("stage 1: [V2]") && d.contains("stage 2: [V1]"), "{d}");
    let c = stdout(&pv_lab(&["components", "E8[1,7]"]));
    assert!(c.contains("V_1: dim 16") && c.contains("V_7: dim 20"), "{c}");
}
