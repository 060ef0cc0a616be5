use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn fatsep_env(args: &[&str], stdin: &str, seed: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fatsep"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    match seed {
        Some(s) => cmd.env("FATSEP_SEED", s),
        None => cmd.env_remove("FATSEP_SEED"),
    };
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fatsep(args: &[&str]) -> (i32, String, String) {
    fatsep_env(args, "", None)
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = fatsep(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn hilbert_table_has_t_h_and_delta_columns() {
    let (code, out, _) = fatsep(&["hilbert", "@3P"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).take(4).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows, vec![vec!["0", "1", "1"], vec!["1", "3", "2"], vec!["2", "6", "3"], vec!["3", "6", "0"]]);
    assert!(out.contains("deg Z = 6, t_stab = 2"));
}

#[test]
fn empty_scheme_has_zero_hilbert_function() {
    let empty = r#"{"n": 2, "field": {"kind": "rational"}, "points": [], "multiplicities": []}"#;
    let (code, out, _) = fatsep_env(&["hilbert", "-", "--json"], empty, None);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["results"]["hilbert"], serde_json::json!([0]));
    assert_eq!(r["results"]["degree"], 0);
    let (code, _, err) = fatsep_env(&["betti-tail", "-"], empty, None);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn input_errors_exit_with_two() {
    let (code, _, err) = fatsep_env(&["hilbert", "-"], "{\"n\": 2,\n \"field\": }", None);
    assert_eq!(code, 2);
    assert!(err.contains("line 2 column"), "{err}");
    assert_eq!(fatsep(&["separators", "@example2", "--point", "7"]).0, 2);
    assert_eq!(fatsep(&["separators", "@example2", "--point", "0"]).0, 2);
    assert_eq!(fatsep(&["hilbert", "@missing"]).0, 2);
    assert_eq!(fatsep(&["hilbert", "/nonexistent.json"]).0, 2);
    assert_eq!(fatsep(&["verify", "no-such-suite"]).0, 2);
    assert_eq!(fatsep(&["ci", "--type", "3,2", "--mult", "2"]).0, 2);
    assert_eq!(fatsep(&["ci", "--type", "2,3", "--mult", "2", "--emit-scheme", "--axes", "1,2;1,2"]).0, 2);
    assert_eq!(fatsep(&["hilbert", "@example2", "--field", "prime:4"]).0, 2);
    // Degree-18 jets need p > 13.
    let (code, _, err) = fatsep(&["hilbert", "@example2", "--field", "prime:5"]);
    assert_eq!(code, 2);
    assert!(err.contains("too small"), "{err}");
}

#[test]
fn seed_comes_from_flag_then_environment_then_default() {
    let seed = |args: &[&str], env: Option<&str>| -> u64 {
        let (code, out, _) = fatsep_env(args, "", env);
        assert_eq!(code, 0);
        serde_json::from_str::<Value>(&out).unwrap()["seed"].as_u64().unwrap()
    };
    let args = ["betti-tail", "@example2", "--json"];
    assert_eq!(seed(&args, None), 42);
    assert_eq!(seed(&args, Some("9")), 9);
    assert_eq!(seed(&["betti-tail", "@example2", "--json", "--seed", "5"], Some("9")), 5);
}

#[test]
fn betti_numbers_do_not_depend_on_the_seed() {
    let a = json(&["betti-tail", "@ci37", "--json", "--seed", "1"]);
    let b = json(&["betti-tail", "@ci37", "--json", "--seed", "2"]);
    assert_eq!(a["results"]["shifts"], b["results"]["shifts"]);
    assert_eq!(a["results"]["socle"], b["results"]["socle"]);
    assert_eq!(a["results"]["socle"], serde_json::json!([[10, 2], [13, 1], [14, 1]]));
}

#[test]
fn emitted_grid_scheme_reads_back() {
    let (code, scheme, _) = fatsep(&["ci", "--type", "2,3", "--mult", "2", "--emit-scheme", "--field", "rational"]);
    assert_eq!(code, 0);
    let (code, out, _) = fatsep_env(&["separators", "-", "--point", "4", "--json"], &scheme, None);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["results"]["profile"], serde_json::json!([5, 6]));
    assert_eq!(r["inputs"]["scheme"]["field"]["kind"], "rational");

    let (_, custom, _) = fatsep(&["ci", "--type", "2,3", "--mult", "1", "--emit-scheme", "--axes", "0,5;1,2,7"]);
    let r: Value = serde_json::from_str(&custom).unwrap();
    assert_eq!(r["points"][0], serde_json::json!(["1", "0", "1"]));
    assert_eq!(r["points"].as_array().unwrap().len(), 6);
}

#[test]
fn ci_formulas() {
    let r = json(&["ci", "--type", "2,3", "--mult", "2", "--profile", "--json"]);
    assert_eq!(r["results"]["profile"], serde_json::json!([5, 6]));
    assert!(r["results"].get("shifts").is_none());
    let r = json(&["ci", "--type", "2,3", "--mult", "1", "--shifts", "--json"]);
    assert_eq!(r["results"]["shifts"], serde_json::json!([5]));
    assert_eq!(r["results"]["rank"], 1);
}

#[test]
fn separator_forms_and_levels() {
    let r = json(&["separators", "@4P", "--point", "1", "--forms", "--levels", "--json"]);
    assert_eq!(r["results"]["forms"], serde_json::json!(["x1^3", "x1^2*x2", "x1*x2^2", "x2^3"]));
    assert_eq!(r["results"]["levels"], serde_json::json!([[3, 3, 3, 3], [2, 2, 2], [1, 1], [0]]));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn fixed_suites_pass() {
    for suite in ["paper-examples", "ci-formula", "cbp"] {
        let r = json(&["verify", suite, "--json"]);
        assert_eq!(r["results"]["failed"], 0, "{suite}");
        assert_eq!(r["inputs"]["suite"], suite);
    }
}

#[test]
fn text_reports_list_every_check() {
    let (code, out, _) = fatsep(&["verify", "rank-bound", "--cases", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS case")).count(), 3);
    assert!(out.ends_with("rank-bound: 3 checks, 0 failed\n"));
}
