//! Verification suites behind `fatsep verify`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::ValueEnum;
use serde_json::{json, Value};

use fatsep_core::cischeme::{
    cbp_check, cbp_fat_removed_check, ci234_scheme, ci37_scheme, ci_power_shifts, ci_separator_profile,
    example2_scheme, grid_ci, power_scheme, verify_deg_ci, CIType, GridSpec,
};
use fatsep_core::corpus::{random_schemes, CorpusParams};
use fatsep_core::exactlin::FieldSpec;
use fatsep_core::polyring::{monomial_basis, Monomial};
use fatsep_core::resolution::{
    artinian_reduction, is_o_sequence, last_betti_shifts, permissible_check, rank_bound_holds, shifts_contain_profile,
    socle_vectors, socle_vectors_permissible, OSequence,
};
use fatsep_core::scheme::FatPointScheme;
use fatsep_core::separator::{
    colon_check, default_window, lowered, minimal_separators, minimal_separators_scan, quotient_dim, saturation_check,
    separating_set, separator_degrees, ScanOrder,
};
use fatsep_core::Result;

use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    HilbertDrop,
    LemmaQuotient,
    Teofat,
    RankBound,
    SoclePermissible,
    Colon,
    Saturation,
    Osequence,
    CiFormula,
    Cbp,
    PaperExamples,
}

impl Suite {
    pub fn name(&self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// A named law evaluated on one scheme: `Ok(None)` passes, `Ok(Some(why))` fails.
type Law = fn(&FatPointScheme, u64) -> Result<Option<String>>;

/// Runs `suite`, returning the summary and the checks in case order.
pub fn run_suite(suite: Suite, field: FieldSpec, seed: u64, cases: usize) -> Result<(Value, Vec<Check>)> {
    field.validate()?;
    let corpus = || -> Vec<(String, FatPointScheme)> {
        random_schemes(seed, cases, field, &CorpusParams::default())
            .into_iter()
            .enumerate()
            .map(|(k, z)| (format!("case {}", k + 1), z))
            .collect()
    };
    let with_example = || -> Result<Vec<(String, FatPointScheme)>> {
        let mut items = vec![("example2".to_string(), example2_scheme(field)?)];
        items.extend(corpus());
        Ok(items)
    };
    let checks = match suite {
        Suite::HilbertDrop => over_schemes(&corpus(), seed, &[("drop identity", drop_identity)]),
        Suite::LemmaQuotient => over_schemes(&corpus(), seed, &[("quotient dimension", quotient_law)]),
        Suite::Teofat => over_schemes(&corpus(), seed, &[("shifts contain separator degrees", shift_containment)]),
        Suite::RankBound => over_schemes(&corpus(), seed, &[("rank bound", rank_bound)]),
        Suite::SoclePermissible => over_schemes(
            &corpus(),
            seed,
            &[
                ("separator degrees are permissible", permissible),
                ("socle vectors are permissible", socle_permissible),
            ],
        ),
        Suite::Colon => over_schemes(&with_example()?, seed, &[("colon ideals", colon)]),
        Suite::Saturation => over_schemes(&with_example()?, seed, &[("saturation", saturation)]),
        Suite::Osequence => over_schemes(&corpus(), seed, &[("delta H is an O-sequence", o_sequences)]),
        Suite::CiFormula => ci_formula(field, seed)?,
        Suite::Cbp => {
            let mut checks = cbp_fixed(field)?;
            let random: Vec<_> = corpus().into_iter().filter(|(_, z)| z.len() >= 2).collect();
            checks.extend(over_schemes(&random, seed, &[("Cayley-Bacharach criteria agree", cbp_consistent)]));
            checks
        }
        Suite::PaperExamples => paper_examples(field, seed)?,
    };
    let failed = checks.iter().filter(|c| !c.pass).count();
    let summary = json!({
        "suite": suite.name(),
        "checks": checks.len(),
        "failed": failed,
    });
    Ok((summary, checks))
}

/// Maps `f` over `items` on all cores, keeping the input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= items.len() {
                    break;
                }
                let r = f(&items[k]);
                *slots[k].lock().unwrap() = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every slot is filled")).collect()
}

fn over_schemes(items: &[(String, FatPointScheme)], seed: u64, laws: &[(&str, Law)]) -> Vec<Check> {
    par_map(items, |(label, z)| {
        laws.iter()
            .map(|(name, law)| {
                let name = format!("{label}: {name}");
                let replay = || serde_json::to_string(&z.to_json()).expect("scheme serializes");
                match law(z, seed) {
                    Ok(None) => Check::new(name, true, format!("{} points, degree {}", z.len(), z.degree())),
                    Ok(Some(why)) => Check::new(name, false, format!("{why}; scheme {}", replay())),
                    Err(e) => Check::new(name, false, format!("error: {e}; scheme {}", replay())),
                }
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

fn delta_at(h: &fatsep_core::scheme::HilbertFunction, t: i64) -> i64 {
    h.value(t) as i64 - h.value(t - 1) as i64
}

fn drop_identity(z: &FatPointScheme, _: u64) -> Result<Option<String>> {
    let hz = z.hilbert_function()?;
    for i in 0..z.len() {
        // Degrees of explicitly extracted separators against two independent HFs.
        let seps = minimal_separators_scan(z, i, ScanOrder::Forward)?;
        let hzp = lowered(z, i)?.hilbert_function()?;
        for t in 0..=hz.t_stab().max(hzp.t_stab()) as i64 + 1 {
            let expected = delta_at(&hz, t) - seps.profile().count_at(t) as i64;
            if delta_at(&hzp, t) != expected {
                return Ok(Some(format!("point {}, degree {t}: dH' = {}, expected {expected}", i + 1, delta_at(&hzp, t))));
            }
        }
    }
    Ok(None)
}

fn quotient_law(z: &FatPointScheme, _: u64) -> Result<Option<String>> {
    let top = z.hilbert_function()?.t_stab() + 1;
    for i in 0..z.len() {
        let seps = minimal_separators_scan(z, i, ScanOrder::Reversed)?;
        for t in 0..=top {
            let q = quotient_dim(z, i, t)?;
            let count = seps.profile().count_up_to(t as i64) as u64;
            if q != count {
                return Ok(Some(format!("point {}, degree {t}: quotient {q}, separators {count}", i + 1)));
            }
        }
    }
    Ok(None)
}

fn shift_containment(z: &FatPointScheme, seed: u64) -> Result<Option<String>> {
    let b = last_betti_shifts(z, seed)?;
    for i in 0..z.len() {
        let profile = separator_degrees(z, i)?;
        if !shifts_contain_profile(&b, &profile, z.n()) {
            return Ok(Some(format!("point {}: {profile} + {} not in {b}", i + 1, z.n())));
        }
    }
    Ok(None)
}

fn rank_bound(z: &FatPointScheme, seed: u64) -> Result<Option<String>> {
    let b = last_betti_shifts(z, seed)?;
    let max_mult = z.mults().iter().copied().max().unwrap_or(0);
    Ok((!rank_bound_holds(&b, z.n(), max_mult)).then(|| format!("{} shifts for multiplicity {max_mult}", b.len())))
}

fn permissible(z: &FatPointScheme, _: u64) -> Result<Option<String>> {
    let h = z.hilbert_function()?;
    for i in 0..z.len() {
        let profile = separator_degrees(z, i)?;
        if !permissible_check(&h, profile.degrees()) {
            return Ok(Some(format!("point {}: {profile} is not permissible", i + 1)));
        }
    }
    Ok(None)
}

fn socle_permissible(z: &FatPointScheme, seed: u64) -> Result<Option<String>> {
    let h = z.hilbert_function()?;
    let b = last_betti_shifts(z, seed)?;
    for i in 0..z.len() {
        let profile = separator_degrees(z, i)?;
        if !socle_vectors_permissible(&h, &b, &profile, z.n())? {
            return Ok(Some(format!("point {}: socle vectors of {b} fail for {profile}", i + 1)));
        }
    }
    Ok(None)
}

fn colon(z: &FatPointScheme, _: u64) -> Result<Option<String>> {
    let window = default_window(z)?;
    for i in 0..z.len() {
        let seps = minimal_separators(z, i)?;
        for j in 1..=seps.forms().len() {
            if !colon_check(z, i, &seps, j, window)? {
                return Ok(Some(format!("point {}, j = {j}, window {window}", i + 1)));
            }
        }
    }
    Ok(None)
}

fn saturation(z: &FatPointScheme, _: u64) -> Result<Option<String>> {
    let window = default_window(z)?;
    for i in 0..z.len() {
        let seps = minimal_separators(z, i)?;
        for j in 0..=seps.forms().len() {
            if !saturation_check(z, i, &seps, j, window)? {
                return Ok(Some(format!("point {}, j = {j}, window {window}", i + 1)));
            }
        }
    }
    Ok(None)
}

fn o_sequences(z: &FatPointScheme, _: u64) -> Result<Option<String>> {
    let mut schemes = vec![z.clone()];
    for i in 0..z.len() {
        schemes.push(lowered(z, i)?);
    }
    // Lowering a lone reduced point leaves the empty scheme, which has no O-sequence.
    for y in schemes.iter().filter(|y| !y.is_empty()) {
        let delta = y.hilbert_function()?.delta();
        if !is_o_sequence(&OSequence::new(delta.clone())) {
            return Ok(Some(format!("delta H = {delta:?}")));
        }
    }
    Ok(None)
}

/// Runs on the support; disagreement between the separator and Hilbert
/// function criteria surfaces as an error.
fn cbp_consistent(z: &FatPointScheme, _: u64) -> Result<Option<String>> {
    let coords = z.points().iter().map(|p| p.coords().to_vec()).collect();
    let support = FatPointScheme::new(z.n(), z.field(), coords, vec![1; z.len()])?;
    cbp_check(&support).map(|_| None)
}


fn ci_formula(field: FieldSpec, seed: u64) -> Result<Vec<Check>> {
    let types: Vec<Vec<u32>> = vec![
        vec![1, 2],
        vec![2, 2],
        vec![2, 3],
        vec![3, 3],
        vec![2, 4],
        vec![1, 2, 3],
        vec![2, 2, 2],
        vec![2, 2, 3],
        vec![2, 3, 4],
    ];
    let mut items = Vec::new();
    for deltas in types {
        let t = CIType::new(deltas)?;
        for m in 1..=3 {
            items.push((t.clone(), m));
        }
    }
    let checks = par_map(&items, |(t, m)| -> Result<Vec<Check>> {
        let (x, _) = grid_ci(&GridSpec::default_for(t, field)?)?;
        let z = power_scheme(&x, *m)?;
        let formula = ci_power_shifts(t, *m);
        let got = last_betti_shifts(&z, seed)?;
        let mut out = vec![Check::expect(
            format!("type {t}, m = {m}: socle shifts equal the formula"),
            &got.shifts().to_vec(),
            &formula.shifts().to_vec(),
        )];
        if *m == 1 {
            let classical = t.deltas().iter().sum::<u32>() - t.n() as u32;
            out.push(Check::expect(
                format!("type {t}: separator degree of a reduced point"),
                &separator_degrees(&z, 0)?.degrees().to_vec(),
                &vec![classical],
            ));
        }
        Ok(out)
    });
    let mut out = Vec::new();
    for c in checks {
        out.extend(c?);
    }
    Ok(out)
}

fn cbp_fixed(field: FieldSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for deltas in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]] {
        let t = CIType::new(deltas)?;
        let (x, _) = grid_ci(&GridSpec::default_for(&t, field)?)?;
        out.push(Check::expect(format!("grid CI({t}) has the Cayley-Bacharach property"), &cbp_check(&x)?, &true));
        let z = power_scheme(&x, 2)?;
        out.push(Check::expect(format!("doubled grid CI({t}), fat points removed"), &cbp_fat_removed_check(&z)?, &true));
        out.push(Check::expect(format!("doubled grid CI({t}), separator degrees"), &verify_deg_ci(&z, &t)?, &true));
    }
    let rows = [[1, 0, 0], [1, 1, 0], [1, 2, 0], [1, 0, 1]];
    let points = rows.iter().map(|r| r.iter().map(|&c| field.from_i64(c)).collect()).collect();
    let x = FatPointScheme::new(2, field, points, vec![1; 4])?;
    out.push(Check::expect("three collinear points and one more", &cbp_check(&x)?, &false));
    out.push(Check::expect(
        "three collinear points and one more, doubled",
        &cbp_fat_removed_check(&power_scheme(&x, 2)?)?,
        &false,
    ));
    Ok(out)
}

fn single_point(n: usize, m: u32, field: FieldSpec) -> Result<FatPointScheme> {
    let mut p = vec![field.zero(); n + 1];
    p[0] = field.one();
    FatPointScheme::new(n, field, vec![p], vec![m])
}

fn levels(z: &FatPointScheme, i: usize) -> Result<Vec<Vec<u32>>> {
    Ok(separating_set(z, i)?.levels().iter().map(|p| p.degrees().to_vec()).collect())
}

/// Every worked example, each value as its own check.
fn paper_examples(field: FieldSpec, seed: u64) -> Result<Vec<Check>> {
    let mut c = Vec::new();

    let z = example2_scheme(field)?;
    c.push(Check::expect(
        "doubled CI(2,3): H_Z",
        &z.hilbert_function()?.values().to_vec(),
        &vec![1, 3, 6, 10, 14, 17, 18],
    ));
    c.push(Check::expect(
        "doubled CI(2,3): H_Z'",
        &z.reduce_multiplicity(0, 1)?.hilbert_function()?.values().to_vec(),
        &vec![1, 3, 6, 10, 14, 16],
    ));
    let profiles: BTreeSet<Vec<u32>> = (0..z.len())
        .map(|i| separator_degrees(&z, i).map(|p| p.degrees().to_vec()))
        .collect::<Result<_>>()?;
    c.push(Check::expect("doubled CI(2,3): separator degrees", &profiles, &BTreeSet::from([vec![5, 6]])));
    c.push(Check::expect(
        "doubled CI(2,3): socle",
        &artinian_reduction(&z, seed)?.socle_dims(),
        &BTreeMap::from([(5, 1), (6, 1)]),
    ));
    c.push(Check::expect(
        "doubled CI(2,3): last shifts",
        &last_betti_shifts(&z, seed)?.shifts().to_vec(),
        &vec![7, 8],
    ));

    let z = single_point(2, 3, field)?;
    c.push(Check::expect("3P: delta H", &z.hilbert_function()?.delta(), &vec![1, 2, 3, 0]));
    c.push(Check::expect("3P: DEG", &levels(&z, 0)?, &vec![vec![2, 2, 2], vec![1, 1], vec![0]]));
    for m in 1..=5u32 {
        let expected: Vec<i64> = (1..=m as i64).chain([0]).collect();
        c.push(Check::expect(
            format!("{m}P: delta H"),
            &single_point(2, m, field)?.hilbert_function()?.delta(),
            &expected,
        ));
    }
    for n in 1..=3usize {
        for m in 1..=4u32 {
            let z = single_point(n, m, field)?;
            let mut got: Vec<String> = minimal_separators(&z, 0)?.forms().iter().map(|f| f.to_string()).collect();
            got.sort();
            let mut want: Vec<String> = monomial_basis(n, m - 1)
                .iter()
                .map(|mono| {
                    let mut e = vec![0];
                    e.extend(mono.exponents());
                    Monomial(e).to_string()
                })
                .collect();
            want.sort();
            c.push(Check::expect(format!("{m}P in P^{n}: separators are the monomials in x_1..x_{n}"), &got, &want));
        }
    }

    let (z2, i) = ci37_scheme(field)?;
    c.push(Check::expect(
        "CI(3,7) example: H_Z2",
        &z2.hilbert_function()?.values().to_vec(),
        &vec![1, 3, 6, 10, 15, 21, 27, 33, 39, 45, 50, 53, 56, 59, 60],
    ));
    let b2 = last_betti_shifts(&z2, seed)?;
    c.push(Check::expect("CI(3,7) example: shifts of Z2", &b2.shifts().to_vec(), &vec![12, 12, 15, 16]));
    c.push(Check::expect(
        "CI(3,7) example: socle vectors of length 2",
        &socle_vectors(&b2, 2, 2)?,
        &[vec![10, 10], vec![10, 13], vec![10, 14], vec![13, 14]].into_iter().collect(),
    ));
    c.push(Check::expect(
        "CI(3,7) example: deg_Z2(P_36)",
        &separator_degrees(&z2, i)?.degrees().to_vec(),
        &vec![10, 13],
    ));
    let z1 = z2.reduce_multiplicity(i, 1)?;
    c.push(Check::expect(
        "CI(3,7) example: shifts of Z1",
        &last_betti_shifts(&z1, seed)?.shifts().to_vec(),
        &vec![11, 12, 14, 16],
    ));
    c.push(Check::expect(
        "CI(3,7) example: deg_Z1(P_36)",
        &separator_degrees(&z1, i)?.degrees().to_vec(),
        &vec![12],
    ));
    c.push(Check::expect("CI(3,7) example: DEG", &levels(&z2, i)?, &vec![vec![10, 13], vec![12]]));

    let t = CIType::new(vec![2, 3, 4])?;
    c.push(Check::expect(
        "CI(2,3,4), m = 3: formula shifts",
        &ci_power_shifts(&t, 3).shifts().to_vec(),
        &vec![13, 14, 15, 15, 16, 17],
    ));
    c.push(Check::expect(
        "CI(2,3,4), m = 3: separator profile",
        &ci_separator_profile(&t, 3).degrees().to_vec(),
        &vec![10, 11, 12, 12, 13, 14],
    ));
    let z = ci234_scheme(field)?;
    c.push(Check::expect("CI(2,3,4), m = 3: degree", &z.degree(), &240));
    c.push(Check::expect(
        "CI(2,3,4), m = 3: socle shifts",
        &last_betti_shifts(&z, seed)?.shifts().to_vec(),
        &vec![13, 14, 15, 15, 16, 17],
    ));
    let t = CIType::new(vec![2, 3])?;
    c.push(Check::expect(
        "CI(2,3), m = 2: formula profile",
        &ci_separator_profile(&t, 2).degrees().to_vec(),
        &vec![5, 6],
    ));
    c.push(Check::expect("CI(2,3), m = 1: formula shifts", &ci_power_shifts(&t, 1).shifts().to_vec(), &vec![5]));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_are_kebab_case() {
        assert_eq!(Suite::HilbertDrop.name(), "hilbert-drop");
        assert_eq!(Suite::PaperExamples.name(), "paper-examples");
        assert_eq!(Suite::value_variants().len(), 11);
    }

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<u64> = (0..50).collect();
        assert_eq!(par_map(&items, |x| x * x), items.iter().map(|x| x * x).collect::<Vec<_>>());
    }

    #[test]
    fn failing_laws_carry_the_scheme() {
        fn never(_: &FatPointScheme, _: u64) -> Result<Option<String>> {
            Ok(Some("forced".into()))
        }
        let z = single_point(2, 2, FieldSpec::default()).unwrap();
        let checks = over_schemes(&[("case 1".into(), z)], 0, &[("never", never)]);
        assert!(!checks[0].pass);
        assert!(checks[0].details.contains("\"multiplicities\":[2]"));
    }
}
