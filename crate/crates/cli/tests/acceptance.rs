//! Acceptance criteria, run through the `fatsep` binary. Prints one
//! PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use fatsep_core::cischeme::example2_scheme;
use fatsep_core::exactlin::FieldSpec;
use fatsep_core::resolution::macaulay_bound;
use serde_json::{json, Value};

type Outcome = Result<(), String>;

/// Name, check and runtime limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

macro_rules! ensure_eq {
    ($got:expr, $want:expr, $what:expr) => {{
        let got = $got;
        let want = $want;
        if got != want {
            return Err(format!("{}: expected {}, got {}", $what, want, got));
        }
    }};
}

fn fatsep(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fatsep"))
        .args(args)
        .env_remove("FATSEP_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Runs with `--json` and requires exit code 0.
fn report_with(args: &[&str], stdin: Option<&str>) -> Result<Value, String> {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = fatsep(&full, stdin);
    if code != 0 {
        return Err(format!("`fatsep {}` exited with {code}: {err}{out}", args.join(" ")));
    }
    serde_json::from_str(&out).map_err(|e| format!("bad JSON from `{}`: {e}", args.join(" ")))
}

fn report(args: &[&str]) -> Result<Value, String> {
    report_with(args, None)
}

fn single_point_json(n: usize, m: u32) -> String {
    let mut p = vec!["0"; n + 1];
    p[0] = "1";
    json!({"n": n, "field": {"kind": "rational"}, "points": [p], "multiplicities": [m]}).to_string()
}

fn profile(r: &Value) -> Value {
    r["results"]["profile"].clone()
}

fn criterion_1() -> Outcome {
    let r = report(&["hilbert", "@example2"])?;
    ensure_eq!(&r["results"]["hilbert"], &json!([1, 3, 6, 10, 14, 17, 18]), "H_Z");
    ensure_eq!(&r["results"]["degree"], &json!(18), "deg Z");
    let lowered = example2_scheme(FieldSpec::default()).unwrap().reduce_multiplicity(0, 1).unwrap();
    let text = serde_json::to_string(&lowered.to_json()).unwrap();
    let r = report_with(&["hilbert", "-"], Some(&text))?;
    ensure_eq!(&r["results"]["hilbert"], &json!([1, 3, 6, 10, 14, 16]), "H_Z'");
    ensure_eq!(&r["results"]["degree"], &json!(16), "deg Z'");
    for point in 1..=6 {
        let r = report(&["separators", "@example2", "--point", &point.to_string()])?;
        ensure_eq!(profile(&r), json!([5, 6]), format!("deg_Z(P_{point})"));
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let r = report(&["hilbert", "@3P"])?;
    ensure_eq!(&r["results"]["delta"], &json!([1, 2, 3, 0]), "delta H_3P");
    let r = report(&["separators", "@3P", "--point", "1", "--levels"])?;
    ensure_eq!(profile(&r), json!([2, 2, 2]), "deg_3P(P)");
    ensure_eq!(&r["results"]["levels"][1], &json!([1, 1]), "deg_2P(P) as a level of 3P");
    let r = report(&["separators", "@2P", "--point", "1"])?;
    ensure_eq!(profile(&r), json!([1, 1]), "deg_2P(P)");
    for m in 1..=5u32 {
        let r = if m <= 4 {
            report(&["hilbert", &format!("@{m}P")])?
        } else {
            report_with(&["hilbert", "-"], Some(&single_point_json(2, m)))?
        };
        let want: Vec<i64> = (1..=m as i64).chain([0]).collect();
        ensure_eq!(&r["results"]["delta"], &json!(want), format!("delta H_{m}P"));
    }
    Ok(())
}

/// Degree-`d` monomials in `x_1..x_n`, rendered like the CLI prints forms.
fn monomial_strings(n: usize, d: u32) -> BTreeSet<String> {
    fn go(k: usize, n: usize, left: u32, exps: &mut Vec<u32>, out: &mut BTreeSet<String>) {
        if k == n {
            if left == 0 {
                let parts: Vec<String> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{e}", j + 1) })
                    .collect();
                out.insert(if parts.is_empty() { "1".into() } else { parts.join("*") });
            }
            return;
        }
        for e in 0..=left {
            exps.push(e);
            go(k + 1, n, left - e, exps, out);
            exps.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(0, n, d, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn criterion_3() -> Outcome {
    for n in 1..=3usize {
        for m in 1..=4u32 {
            let r = report_with(&["separators", "-", "--point", "1", "--forms"], Some(&single_point_json(n, m)))?;
            let forms: BTreeSet<String> = r["results"]["forms"]
                .as_array()
                .ok_or("no forms")?
                .iter()
                .map(|f| f.as_str().unwrap().to_string())
                .collect();
            let want = monomial_strings(n, m - 1);
            if forms != want {
                return Err(format!("{m}P in P^{n}: expected {want:?}, got {forms:?}"));
            }
            let count = binomial((m + n as u32 - 2) as u64, n as u64 - 1) as usize;
            ensure_eq!(profile(&r), json!(vec![m - 1; count]), format!("profile of {m}P in P^{n}"));
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let r = report(&["hilbert", "@ci37"])?;
    ensure_eq!(
        &r["results"]["hilbert"],
        &json!([1, 3, 6, 10, 15, 21, 27, 33, 39, 45, 50, 53, 56, 59, 60]),
        "H_Z2"
    );
    let r = report(&["betti-tail", "@ci37", "--nu", "2"])?;
    ensure_eq!(&r["results"]["shifts"], &json!([12, 12, 15, 16]), "B(Z2)");
    ensure_eq!(
        &r["results"]["socle_vectors"][0]["vectors"],
        &json!([[10, 10], [10, 13], [10, 14], [13, 14]]),
        "socle vectors of length 2"
    );
    let r = report(&["separators", "@ci37", "--point", "20", "--levels"])?;
    ensure_eq!(profile(&r), json!([10, 13]), "deg_Z2(P_36)");
    ensure_eq!(&r["results"]["levels"], &json!([[10, 13], [12]]), "DEG");
    let r = report(&["betti-tail", "@ci37-z1"])?;
    ensure_eq!(&r["results"]["shifts"], &json!([11, 12, 14, 16]), "B(Z1)");
    let r = report(&["separators", "@ci37-z1", "--point", "20"])?;
    ensure_eq!(profile(&r), json!([12]), "deg_Z1(P_36)");
    Ok(())
}

fn criterion_5() -> Outcome {
    let r = report(&["ci", "--type", "2,3,4", "--mult", "3", "--shifts", "--profile"])?;
    ensure_eq!(&r["results"]["shifts"], &json!([13, 14, 15, 15, 16, 17]), "formula shifts");
    ensure_eq!(&r["results"]["profile"], &json!([10, 11, 12, 12, 13, 14]), "formula profile");
    let r = report(&["hilbert", "@ci234"])?;
    ensure_eq!(&r["results"]["degree"], &json!(240), "deg Z");
    let r = report(&["betti-tail", "@ci234"])?;
    ensure_eq!(&r["results"]["shifts"], &json!([13, 14, 15, 15, 16, 17]), "socle shifts");
    Ok(())
}

fn suite(name: &str, cases: usize, expected_checks: usize) -> Outcome {
    let r = report(&["verify", name, "--seed", "42", "--cases", &cases.to_string()])?;
    ensure_eq!(&r["results"]["failed"], &json!(0), format!("{name} failures"));
    ensure_eq!(&r["results"]["checks"], &json!(expected_checks), format!("{name} checks"));
    Ok(())
}

fn criterion_6() -> Outcome {
    suite("hilbert-drop", 25, 25)?;
    suite("lemma-quotient", 25, 25)?;
    suite("teofat", 25, 25)?;
    suite("rank-bound", 25, 25)?;
    suite("socle-permissible", 25, 50)
}

fn criterion_7() -> Outcome {
    // The example2 fixture plus ten random cases.
    suite("colon", 10, 11)?;
    suite("saturation", 10, 11)
}

/// Largest `h_{t+1}` after `h_t = a`: the `a` lex-last degree-`t`
/// monomials, and the degree-`t+1` monomials all of whose degree-`t`
/// divisors are among them.
fn lex_growth(a: u64, t: u32, nvars: usize) -> u64 {
    fn monomials(nvars: usize, t: u32) -> Vec<Vec<u32>> {
        if nvars == 1 {
            return vec![vec![t]];
        }
        let mut out = Vec::new();
        for e in (0..=t).rev() {
            for mut rest in monomials(nvars - 1, t - e) {
                rest.insert(0, e);
                out.push(rest);
            }
        }
        out
    }
    let degree_t = monomials(nvars, t);
    if (degree_t.len() as u64) < a {
        return u64::MAX;
    }
    let kept: BTreeSet<Vec<u32>> = degree_t[degree_t.len() - a as usize..].iter().cloned().collect();
    monomials(nvars, t + 1)
        .into_iter()
        .filter(|m| {
            (0..nvars).all(|k| {
                let mut d = m.clone();
                m[k] == 0 || {
                    d[k] -= 1;
                    kept.contains(&d)
                }
            })
        })
        .count() as u64
}

fn criterion_8() -> Outcome {
    for t in 1..=4u32 {
        for a in 0..=30u64 {
            let mut nvars = 1;
            while lex_growth(a, t, nvars) == u64::MAX {
                nvars += 1;
            }
            ensure_eq!(macaulay_bound(a, t), lex_growth(a, t, nvars), format!("a = {a}, t = {t}"));
        }
    }
    suite("osequence", 25, 25)
}

fn repeat_identical(args: &[&str]) -> Outcome {
    let mut full = args.to_vec();
    full.push("--json");
    let first = fatsep(&full, None);
    let second = fatsep(&full, None);
    if first.0 != 0 || first != second {
        return Err(format!("`fatsep {}` is not reproducible", full.join(" ")));
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    repeat_identical(&["hilbert", "@example2"])?;
    repeat_identical(&["separators", "@ci37", "--point", "20", "--levels", "--forms"])?;
    repeat_identical(&["betti-tail", "@ci37", "--nu", "2,3", "--seed", "7"])?;
    repeat_identical(&["ci", "--type", "2,3", "--mult", "2", "--emit-scheme"])?;
    repeat_identical(&["verify", "hilbert-drop", "--cases", "10"])?;

    let fixtures: &[(&str, &[usize])] = &[
        ("example2", &[1, 2, 3, 4, 5, 6]),
        ("1P", &[1]),
        ("2P", &[1]),
        ("3P", &[1]),
        ("4P", &[1]),
        ("ci37", &[1, 7, 20]),
        ("ci37-z1", &[1, 20]),
        ("ci234", &[1]),
    ];
    for (name, points) in fixtures {
        let source = format!("@{name}");
        let both = |args: &[&str]| -> Result<(Value, Value), String> {
            let mut p = args.to_vec();
            p.extend(["--field", "prime:2147483647"]);
            let mut q = args.to_vec();
            q.extend(["--field", "rational"]);
            Ok((report(&p)?, report(&q)?))
        };
        let (p, q) = both(&["hilbert", &source])?;
        ensure_eq!(&q["results"]["hilbert"], &p["results"]["hilbert"], format!("{name}: Hilbert functions"));
        for point in *points {
            let (p, q) = both(&["separators", &source, "--point", &point.to_string()])?;
            ensure_eq!(profile(&q), profile(&p), format!("{name}: profile of point {point}"));
        }
        let (p, q) = both(&["betti-tail", &source])?;
        ensure_eq!(&q["results"]["shifts"], &p["results"]["shifts"], format!("{name}: shifts"));
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("1 doubled CI(2,3)", criterion_1, Some(1)),
        ("2 fat point in the plane", criterion_2, Some(1)),
        ("3 separators of mP", criterion_3, Some(2)),
        ("4 doubled CI(3,7) minus a point", criterion_4, Some(30)),
        ("5 triple points on CI(2,3,4)", criterion_5, Some(120)),
        ("6 property suite", criterion_6, Some(120)),
        ("7 colon and saturation windows", criterion_7, Some(60)),
        ("8 Macaulay bound and O-sequences", criterion_8, Some(10)),
        ("9 determinism and field agreement", criterion_9, None),
    ];
    let mut failures = Vec::new();
    let mut stdout = std::io::stdout();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(secs)) = (&result, limit) {
            if elapsed > Duration::from_secs(secs) {
                result = Err(format!("took {elapsed:.2?}, limit {secs} s"));
            }
        }
        // Written to the raw handle so the lines show without --nocapture.
        let line = match &result {
            Ok(()) => format!("PASS criterion {name} ({elapsed:.2?})\n"),
            Err(why) => format!("FAIL criterion {name} ({elapsed:.2?}): {why}\n"),
        };
        stdout.write_all(line.as_bytes()).unwrap();
        if result.is_err() {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "{}", failures.concat());
}
