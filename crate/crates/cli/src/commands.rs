//! Subcommand implementations.

use serde_json::{json, Value};

use fatsep_core::cischeme::{ci_power_shifts, ci_rank, ci_separator_profile, grid_ci, power_scheme, GridSpec};
use fatsep_core::resolution::{artinian_reduction, rank_bound_holds, shifts_from_socle, socle_vectors};
use fatsep_core::scheme::FatPointScheme;
use fatsep_core::separator::{is_separator, minimal_separators, nu, separating_set, separator_degrees};
use fatsep_core::{Error, Result};

use crate::fixtures::load_scheme;
use crate::report::{Check, RunReport};
use crate::suites::run_suite;
use crate::{Cli, Command};

/// A report and its plain-text rendering.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: RunReport,
    pub text: String,
}

/// Internal inconsistencies count as verification failures, everything
/// else as bad input.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_) => 1,
        _ => 2,
    }
}

pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Hilbert { scheme } => hilbert(cli, scheme),
        Command::Separators {
            scheme,
            point,
            forms,
            levels,
        } => separators(cli, scheme, *point, *forms, *levels),
        Command::BettiTail { scheme, nu } => betti_tail(cli, scheme, nu),
        Command::Ci {
            ci_type,
            mult,
            axes,
            shifts,
            profile,
            emit_scheme,
        } => ci(cli, ci_type, *mult, axes.as_deref(), *shifts, *profile, *emit_scheme),
        Command::Verify { suite, cases } => {
            let field = cli.field.unwrap_or_default();
            let (results, checks) = run_suite(*suite, field, cli.seed, *cases)?;
            let report = RunReport {
                command: "verify".into(),
                inputs: json!({"suite": suite.name(), "cases": cases, "field": field}),
                results,
                checks,
                seed: cli.seed,
            };
            let failed = report.checks.iter().filter(|c| !c.pass).count();
            let mut text = report.check_lines();
            text.push_str(&format!(
                "{}: {} checks, {} failed\n",
                suite.name(),
                report.checks.len(),
                failed
            ));
            Ok(Output { report, text })
        }
    }
}

fn scheme_inputs(source: &str, z: &FatPointScheme) -> Value {
    json!({"source": source, "scheme": z.to_json()})
}

fn finish(command: &str, inputs: Value, results: Value, checks: Vec<Check>, seed: u64, mut text: String) -> Output {
    let report = RunReport {
        command: command.into(),
        inputs,
        results,
        checks,
        seed,
    };
    text.push_str(&report.check_lines());
    Output { report, text }
}

fn hilbert(cli: &Cli, source: &str) -> Result<Output> {
    let z = load_scheme(source, cli.field)?;
    let h = z.hilbert_function()?;
    let delta = h.delta();
    let mut text = format!("{:>4} {:>10} {:>10}\n", "t", "H(t)", "dH(t)");
    for (t, d) in delta.iter().enumerate() {
        text.push_str(&format!("{:>4} {:>10} {:>10}\n", t, h.value(t as i64), d));
    }
    text.push_str(&format!("deg Z = {}, t_stab = {}\n", z.degree(), h.t_stab()));
    let results = json!({
        "hilbert": h.values(),
        "delta": delta,
        "degree": z.degree(),
        "t_stab": h.t_stab(),
    });
    let checks = vec![Check::expect("stable value equals degree", &h.stable_value(), &(z.degree() as u64))];
    Ok(finish("hilbert", scheme_inputs(source, &z), results, checks, cli.seed, text))
}

fn point_index(z: &FatPointScheme, point: usize) -> Result<usize> {
    if point == 0 || point > z.len() {
        return Err(Error::OutOfRange {
            what: "point",
            value: point,
            allowed: format!("1..={}", z.len()),
        });
    }
    Ok(point - 1)
}

fn separators(cli: &Cli, source: &str, point: usize, forms: bool, levels: bool) -> Result<Output> {
    let z = load_scheme(source, cli.field)?;
    let i = point_index(&z, point)?;
    let profile = separator_degrees(&z, i)?;
    let expected_len = nu(&z, i)?;
    let mut text = format!("deg_Z(P_{point}) = {profile}\n");
    let mut results = json!({"point": point, "profile": profile, "nu": expected_len});
    let mut checks = vec![Check::expect("profile length equals nu", &profile.len(), &expected_len)];
    if forms {
        let seps = minimal_separators(&z, i)?;
        let mut all_separate = true;
        for f in seps.forms() {
            all_separate &= is_separator(&z, i, f)?;
        }
        let strings: Vec<String> = seps.forms().iter().map(|f| f.to_string()).collect();
        for s in &strings {
            text.push_str(&format!("  {s}\n"));
        }
        results["forms"] = json!(strings);
        checks.push(Check::new("forms are separators", all_separate, format!("{} forms", strings.len())));
        checks.push(Check::expect("forms realize the profile", &seps.profile().degrees().to_vec(), &profile.degrees().to_vec()));
    }
    if levels {
        let set = separating_set(&z, i)?;
        for (h, level) in set.levels().iter().enumerate() {
            text.push_str(&format!("level {}: multiplicity {} -> {level}\n", h + 1, z.mults()[i] - h as u32));
        }
        let distinct: Vec<String> = set.as_set().iter().map(|p| p.to_string()).collect();
        text.push_str(&format!("DEG = {{{}}}\n", distinct.join(", ")));
        results["levels"] = json!(set);
        checks.push(Check::expect("one level per multiplicity", &set.levels().len(), &(z.mults()[i] as usize)));
    }
    Ok(finish("separators", json!({"source": source, "scheme": z.to_json(), "point": point}), results, checks, cli.seed, text))
}

fn betti_tail(cli: &Cli, source: &str, lengths: &[usize]) -> Result<Output> {
    let z = load_scheme(source, cli.field)?;
    let h = z.hilbert_function()?;
    let a = artinian_reduction(&z, cli.seed)?;
    let shifts = shifts_from_socle(&a, z.n());
    let socle: Vec<[usize; 2]> = a.socle_dims().iter().map(|(&t, &d)| [t as usize, d]).collect();
    let mut text = format!("B_(n-1) = {shifts}\nsocle:");
    for [t, d] in &socle {
        text.push_str(&format!(" {d} in degree {t};"));
    }
    text.pop();
    text.push('\n');
    text.push_str(&format!("linear form: {} ({} attempts)\n", a.linear_form, a.attempts));
    let mut vectors = Vec::new();
    for &tau in lengths {
        let s = socle_vectors(&shifts, tau, z.n())?;
        let rendered: Vec<String> = s
            .iter()
            .map(|v| format!("({})", v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        text.push_str(&format!("socle vectors of length {tau}: {{{}}}\n", rendered.join(", ")));
        vectors.push(json!({"length": tau, "vectors": s}));
    }
    let dims: Vec<i64> = a.dims().iter().map(|&d| d as i64).collect();
    let delta = h.delta();
    let max_mult = z.mults().iter().copied().max().unwrap_or(0);
    let checks = vec![
        Check::expect("artinian reduction has Hilbert function delta H", &dims, &delta),
        Check::new("rank bound", rank_bound_holds(&shifts, z.n(), max_mult), format!("{} shifts", shifts.len())),
    ];
    let results = json!({
        "shifts": shifts,
        "socle": socle,
        "linear_form": a.linear_form.to_string(),
        "attempts": a.attempts,
        "socle_vectors": vectors,
    });
    let inputs = json!({"source": source, "scheme": z.to_json(), "nu": lengths});
    Ok(finish("betti-tail", inputs, results, checks, cli.seed, text))
}

fn ci(
    cli: &Cli,
    ci_type: &fatsep_core::cischeme::CIType,
    m: u32,
    axes: Option<&str>,
    want_shifts: bool,
    want_profile: bool,
    emit: bool,
) -> Result<Output> {
    if m == 0 {
        return Err(Error::InvalidInput("multiplicity must be at least 1".into()));
    }
    let n = ci_type.n();
    let all = !(want_shifts || want_profile || emit);
    let shifts = ci_power_shifts(ci_type, m);
    let profile = ci_separator_profile(ci_type, m);
    let rank = ci_rank(m, n);
    let mut results = json!({"rank": rank});
    let mut text = String::new();
    if want_shifts || all {
        results["shifts"] = json!(shifts);
        text.push_str(&format!("shifts = {shifts}\n"));
    }
    if want_profile || all {
        results["profile"] = json!(profile);
        text.push_str(&format!("profile = {profile}\n"));
    }
    let field = cli.field.unwrap_or_default();
    if emit {
        let spec = match axes {
            Some(a) => GridSpec::parse(a, field)?,
            None => GridSpec::default_for(ci_type, field)?,
        };
        if spec.sizes() != ci_type.deltas() {
            return Err(Error::InvalidInput(format!(
                "axes have sizes {:?} but the type is {ci_type}",
                spec.sizes()
            )));
        }
        let (x, _) = grid_ci(&spec)?;
        let z = power_scheme(&x, m)?;
        let scheme = z.to_json();
        results["scheme"] = json!(scheme);
        let mut body = serde_json::to_string_pretty(&scheme).expect("scheme serializes");
        body.push('\n');
        if !(want_shifts || want_profile) {
            // Bare scheme JSON so the output can be fed back in.
            let report = RunReport {
                command: "ci".into(),
                inputs: ci_inputs(ci_type, m, axes, field),
                results,
                checks: Vec::new(),
                seed: cli.seed,
            };
            return Ok(Output { report, text: body });
        }
        text.push_str(&body);
    }
    let lifted: Vec<u32> = profile.degrees().iter().map(|d| d + n as u32).collect();
    let checks = vec![
        Check::expect("shift count equals rank", &(shifts.len() as u64), &rank),
        Check::expect("profile plus n gives the shifts", &lifted.as_slice(), &shifts.shifts()),
    ];
    Ok(finish("ci", ci_inputs(ci_type, m, axes, field), results, checks, cli.seed, text))
}

fn ci_inputs(ci_type: &fatsep_core::cischeme::CIType, m: u32, axes: Option<&str>, field: fatsep_core::exactlin::FieldSpec) -> Value {
    json!({"type": ci_type.deltas(), "mult": m, "axes": axes, "field": field})
}
