//! Separators of a fat point and their degrees.
//!
//! For `Z = m_1 P_1 + ... + m_s P_s` and `Z'` the scheme with `m_i` lowered by
//! one, a separator of `P_i` is a form in `I_{Z'} \ I_Z`. The quotient
//! `I_{Z'}/I_Z` has dimension `nu = C(m_i + n - 2, n - 1)` in high degree and
//! its minimal generators have a well-defined degree tuple.
//!
//! A form `F` in `I_{Z'}` already satisfies every jet condition of `Z` except
//! the order-`(m_i - 1)` conditions at `P_i`. Those jets therefore identify
//! the class of `F` in `I_{Z'}/I_Z`, and every computation below works in
//! that small space instead of in `R_t`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{kernel_rows, Field, RowBasis};
use crate::polyring::{binomial, shift_by_monomial, HomogeneousForm, Monomial, MonomialTable};
use crate::scheme::{apply_rows, ring_dim, transpose, FatPointScheme, HilbertFunction, Jets};
use crate::with_field;

/// Nondecreasing tuple of separator degrees `deg_Z(P_i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SeparatorProfile {
    degrees: Vec<u32>,
}

impl SeparatorProfile {
    pub fn new(mut degrees: Vec<u32>) -> Self {
        degrees.sort_unstable();
        SeparatorProfile { degrees }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `#{d_j <= t}`.
    pub fn count_up_to(&self, t: i64) -> usize {
        self.degrees.iter().filter(|&&d| (d as i64) <= t).count()
    }

    /// `#{d_j = t}`.
    pub fn count_at(&self, t: i64) -> usize {
        self.degrees.iter().filter(|&&d| d as i64 == t).count()
    }
}

impl fmt::Display for SeparatorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Explicit minimal separators, sorted by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorSet {
    forms: Vec<HomogeneousForm>,
    profile: SeparatorProfile,
}

impl SeparatorSet {
    pub fn forms(&self) -> &[HomogeneousForm] {
        &self.forms
    }

    pub fn profile(&self) -> &SeparatorProfile {
        &self.profile
    }
}

/// `DEG_Z(m_i P_i)`: one profile per level `h = 1..=m_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SeparatingSet {
    levels: Vec<SeparatorProfile>,
}

impl SeparatingSet {
    pub fn levels(&self) -> &[SeparatorProfile] {
        &self.levels
    }

    /// The distinct profiles, as a set.
    pub fn as_set(&self) -> BTreeSet<SeparatorProfile> {
        self.levels.iter().cloned().collect()
    }
}

/// Scan order for candidate separators inside each degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanOrder {
    #[default]
    Forward,
    Reversed,
}

/// `nu = deg Z - deg Z' = C(m_i + n - 2, n - 1)`.
pub fn nu(z: &FatPointScheme, i: usize) -> Result<usize> {
    z.check_index(i)?;
    Ok(nu_for(z.n(), z.mults()[i]))
}

pub fn nu_for(n: usize, m: u32) -> usize {
    binomial(m as u64 + n as u64 - 2, n as u64 - 1) as usize
}

/// `Z'`: point `i` with its multiplicity lowered by one.
pub fn lowered(z: &FatPointScheme, i: usize) -> Result<FatPointScheme> {
    z.reduce_multiplicity(i, 1)
}

/// `dim (I_{Z'}/I_Z)_t = H_Z(t) - H_{Z'}(t)`.
pub fn quotient_dim(z: &FatPointScheme, i: usize, t: u32) -> Result<u64> {
    let hz = z.hilbert_function()?;
    let hzp = lowered(z, i)?.hilbert_function()?;
    Ok(hz.value(t as i64) - hzp.value(t as i64))
}

/// Recovers the degree tuple from `H_Z` and `H_{Z'}`: the number of entries
/// equal to `t` is the jump of `H_Z - H_{Z'}` at `t`.
pub fn profile_from_hfs(hz: &HilbertFunction, hzp: &HilbertFunction) -> Result<SeparatorProfile> {
    let top = hz.t_stab().max(hzp.t_stab()) as i64 + 1;
    let gap = |t: i64| -> Result<i64> {
        let g = hz.value(t) as i64 - hzp.value(t) as i64;
        if g < 0 {
            return Err(Error::Inconsistent(format!("H_Z'({t}) exceeds H_Z({t})")));
        }
        Ok(g)
    };
    let mut degrees = Vec::new();
    for t in 0..=top {
        let count = gap(t)? - gap(t - 1)?;
        if count < 0 {
            return Err(Error::Inconsistent(format!(
                "H_Z - H_Z' decreases at degree {t}"
            )));
        }
        degrees.extend(std::iter::repeat_n(t as u32, count as usize));
    }
    Ok(SeparatorProfile::new(degrees))
}

/// `deg_Z(P_i)` from the Hilbert functions of `Z` and `Z'`.
pub fn separator_degrees(z: &FatPointScheme, i: usize) -> Result<SeparatorProfile> {
    let expected = nu(z, i)?;
    let hz = z.hilbert_function()?;
    let profile = separator_degrees_given(z, i, &hz)?;
    if profile.len() != expected {
        return Err(Error::Inconsistent(format!(
            "separator profile {profile} has {} entries, expected {expected}",
            profile.len()
        )));
    }
    Ok(profile)
}

/// Like [`separator_degrees`] with `H_Z` already known.
pub fn separator_degrees_given(z: &FatPointScheme, i: usize, hz: &HilbertFunction) -> Result<SeparatorProfile> {
    let hzp = lowered(z, i)?.hilbert_function()?;
    profile_from_hfs(hz, &hzp)
}

pub fn minimal_separators(z: &FatPointScheme, i: usize) -> Result<SeparatorSet> {
    minimal_separators_scan(z, i, ScanOrder::Forward)
}

/// Extracts explicit minimal separators degree by degree: in each degree the
/// multiples `x_l * G` of everything found so far are taken first, then basis
/// elements of `(I_{Z'})_t` are scanned (in `order`) and kept whenever they
/// are independent modulo `I_Z` and the multiples.
pub fn minimal_separators_scan(z: &FatPointScheme, i: usize, order: ScanOrder) -> Result<SeparatorSet> {
    let expected = separator_degrees(z, i)?;
    z.field().require_exceeds(z.t_cap() as u64)?;
    let forms = with_field!(z.field(), f => extract_separators(&f, z, i, order)?);
    let profile = SeparatorProfile::new(forms.iter().map(HomogeneousForm::degree).collect());
    if profile != expected {
        return Err(Error::Inconsistent(format!(
            "extracted separators have degrees {profile}, Hilbert functions give {expected}"
        )));
    }
    Ok(SeparatorSet { forms, profile })
}

/// Order-`(m_i - 1)` jets at `P_i` in the degree of `table`.
fn point_jets<F: Field>(jets: &Jets<F>, i: usize, table: &MonomialTable) -> Vec<Vec<F::Elem>> {
    jets.point_rows(i, (jets.mult(i) - 1).min(table.degree()), table)
}

fn extract_separators<F: Field>(
    field: &F,
    z: &FatPointScheme,
    i: usize,
    order: ScanOrder,
) -> Result<Vec<HomogeneousForm>> {
    let nvars = z.nvars();
    let target = nu(z, i)?;
    let jets = Jets::new(field, z);
    let zp = lowered(z, i)?;
    let jets_p = Jets::new(field, &zp);

    let mut found = Vec::new();
    let mut carried: Vec<Vec<F::Elem>> = Vec::new();
    let mut prev_table = MonomialTable::new(nvars, 0);
    for t in 0..=z.t_cap() {
        let table = MonomialTable::new(nvars, t);
        let ji = point_jets(&jets, i, &table);
        let mut span = RowBasis::new(field.clone(), ji.len());
        let mut next = Vec::new();
        for g in &carried {
            for l in 0..nvars {
                let v = shift_by_monomial(field, g, &prev_table, &table, &Monomial::var(nvars, l));
                if span.insert(apply_rows(field, &ji, &v)) {
                    next.push(v);
                }
            }
        }
        let mut candidates = kernel_rows(field, table.len(), &jets_p.rows(&table));
        if order == ScanOrder::Reversed {
            candidates.reverse();
        }
        for v in candidates {
            if span.is_full() {
                break;
            }
            if span.insert(apply_rows(field, &ji, &v)) {
                found.push(HomogeneousForm::from_elems(field, &table, &v));
                next.push(v);
            }
        }
        carried = next;
        prev_table = table;
        if found.len() == target && carried.len() == target {
            return Ok(found);
        }
    }
    Err(Error::Inconsistent(format!(
        "found {} of {target} separators by degree {}",
        found.len(),
        z.t_cap()
    )))
}

/// `F` is a separator of `P_i` of multiplicity `m_i` iff `F` is in `I_{Z'}` but not in `I_Z`.
pub fn is_separator(z: &FatPointScheme, i: usize, form: &HomogeneousForm) -> Result<bool> {
    Ok(lowered(z, i)?.contains(form)? && !z.contains(form)?)
}

/// Profiles at every level `h = 1..=m_i`; level `h` is `deg` of `P_i` in
/// `Z_{m_i - h + 1}(P_i)`.
pub fn separating_set(z: &FatPointScheme, i: usize) -> Result<SeparatingSet> {
    z.check_index(i)?;
    let levels = (1..=z.mults()[i])
        .map(|h| separator_degrees(&z.reduce_multiplicity(i, h - 1)?, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparatingSet { levels })
}

/// Default truncation window for the colon and saturation checks.
pub fn default_window(z: &FatPointScheme) -> Result<u32> {
    Ok(z.hilbert_function()?.t_stab() + 1)
}

/// Degree-by-degree spans of `(F_1, ..., F_j)` modulo `I_Z`, seen through a
/// linear map on coefficient vectors (`image`). Degree `t` holds coefficient
/// vectors whose images form a basis of the span.
struct GeneratedSpan<'a, F: Field> {
    field: &'a F,
    nvars: usize,
    generators: Vec<(u32, Vec<F::Elem>)>,
    carried: Vec<Vec<F::Elem>>,
    table: MonomialTable,
    next_degree: u32,
}

impl<'a, F: Field> GeneratedSpan<'a, F> {
    fn new(field: &'a F, nvars: usize, forms: &[HomogeneousForm]) -> Self {
        let generators = forms
            .iter()
            .map(|g| (g.degree(), g.to_elems(field, &MonomialTable::new(nvars, g.degree()))))
            .collect();
        GeneratedSpan {
            field,
            nvars,
            generators,
            carried: Vec::new(),
            table: MonomialTable::new(nvars, 0),
            next_degree: 0,
        }
    }

    fn next_degree(&self) -> u32 {
        self.next_degree
    }

    /// Advances to the next degree. `rows` maps degree-`t` coefficient
    /// vectors into the space where independence modulo `I_Z` is decided.
    fn step(&mut self, rows: &[Vec<F::Elem>]) -> (MonomialTable, RowBasis<F>) {
        let t = self.next_degree;
        let field = self.field;
        let table = MonomialTable::new(self.nvars, t);
        let mut span = RowBasis::new(field.clone(), rows.len());
        let mut next = Vec::new();
        for g in &self.carried {
            for l in 0..self.nvars {
                let v = shift_by_monomial(field, g, &self.table, &table, &Monomial::var(self.nvars, l));
                if span.insert(apply_rows(field, rows, &v)) {
                    next.push(v);
                }
            }
        }
        for (d, g) in &self.generators {
            if *d == t && span.insert(apply_rows(field, rows, g)) {
                next.push(g.clone());
            }
        }
        self.carried = next;
        self.table = table.clone();
        self.next_degree += 1;
        (table, span)
    }
}

fn check_j(seps: &SeparatorSet, j: usize, allow_zero: bool) -> Result<()> {
    let lo = if allow_zero { 0 } else { 1 };
    if j < lo || j > seps.forms.len() {
        return Err(Error::OutOfRange {
            what: "separator count j",
            value: j,
            allowed: format!("{lo}..={}", seps.forms.len()),
        });
    }
    Ok(())
}

/// Hilbert function of `R/(I_Z, F_1, ..., F_j)`, the intermediate scheme `W_j`.
pub fn intermediate_hf(z: &FatPointScheme, i: usize, seps: &SeparatorSet, j: usize) -> Result<HilbertFunction> {
    check_j(seps, j, true)?;
    let hz = z.hilbert_function()?;
    with_field!(z.field(), f => {
        let jets = Jets::new(&f, z);
        let mut gen = GeneratedSpan::new(&f, z.nvars(), &seps.forms[..j]);
        let target = z.degree() as u64 - j as u64;
        let last_degree = if j == 0 { 0 } else { seps.profile.degrees()[j - 1] };
        let mut values = Vec::new();
        for t in 0..=z.t_cap() {
            let rows = point_jets(&jets, i, &MonomialTable::new(z.nvars(), t));
            let (_, span) = gen.step(&rows);
            let h = hz.value(t as i64) - span.rank() as u64;
            values.push(h);
            if h == target && t >= hz.t_stab() && t >= last_degree {
                return Ok(HilbertFunction::from_values(values));
            }
        }
        Err(Error::Inconsistent(format!("intermediate scheme W_{j} did not reach degree {target}")))
    })
}

/// Truncated check of `(I_Z, F_1..F_{j-1}) : F_j = I_{P_i}` in degrees `0..=t_max`
/// (`j` is 1-based).
pub fn colon_check(z: &FatPointScheme, i: usize, seps: &SeparatorSet, j: usize, t_max: u32) -> Result<bool> {
    check_j(seps, j, false)?;
    let dj = seps.forms[j - 1].degree();
    z.field().require_exceeds((t_max + dj) as u64)?;
    with_field!(z.field(), f => {
        let nvars = z.nvars();
        let jets = Jets::new(&f, z);
        let fj = &seps.forms[j - 1];
        let fj_elems = fj.to_elems(&f, &MonomialTable::new(nvars, dj));
        let fj_table = MonomialTable::new(nvars, dj);
        let point: Vec<_> = z.points()[i].coords().iter().map(|c| f.from_scalar(c).unwrap()).collect();

        let mut gen = GeneratedSpan::new(&f, nvars, &seps.forms[..j - 1]);
        let mut spans = Vec::new();
        while gen.next_degree() <= t_max + dj {
            let rows = point_jets(&jets, i, &MonomialTable::new(nvars, gen.next_degree()));
            spans.push(gen.step(&rows));
        }
        for t in 0..=t_max {
            let (target_table, span) = &spans[(t + dj) as usize];
            let ji = point_jets(&jets, i, target_table);
            let source = MonomialTable::new(nvars, t);
            // Column k: image of (monomial k) * F_j modulo the span.
            let columns: Vec<Vec<_>> = source
                .monomials()
                .iter()
                .map(|m| {
                    let v = shift_by_monomial(&f, &fj_elems, &fj_table, target_table, m);
                    span.reduced(&apply_rows(&f, &ji, &v))
                })
                .collect();
            let rows = transpose(&columns, span.width());
            let kernel = kernel_rows(&f, source.len(), &rows);
            if kernel.len() + 1 != source.len() {
                return Ok(false);
            }
            let vanishes_at_point = kernel.iter().all(|g| {
                let value = source.monomials().iter().zip(g).fold(f.zero(), |acc, (m, c)| {
                    let mut term = c.clone();
                    for (x, &e) in point.iter().zip(m.exponents()) {
                        for _ in 0..e {
                            term = f.mul(&term, x);
                        }
                    }
                    f.add(&acc, &term)
                });
                f.is_zero(&value)
            });
            if !vanishes_at_point {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

/// Truncated saturation check of `J = (I_Z, F_1..F_j)`: for `t <= t_max`, every
/// `G` of degree `t` with `x_l G` in `J` for all `l` already lies in `J`.
pub fn saturation_check(z: &FatPointScheme, i: usize, seps: &SeparatorSet, j: usize, t_max: u32) -> Result<bool> {
    check_j(seps, j, true)?;
    z.field().require_exceeds(t_max as u64 + 1)?;
    z.check_index(i)?;
    let hz = z.hilbert_function()?;
    with_field!(z.field(), f => {
        let nvars = z.nvars();
        let jets = Jets::new(&f, z);
        let mut gen = GeneratedSpan::new(&f, nvars, &seps.forms[..j]);
        let mut spans = Vec::new();
        while gen.next_degree() <= t_max + 1 {
            let rows = jets.rows(&MonomialTable::new(nvars, gen.next_degree()));
            spans.push(gen.step(&rows));
        }
        for t in 0..=t_max {
            let source = MonomialTable::new(nvars, t);
            let (next_table, next_span) = &spans[t as usize + 1];
            let columns_next = jets.columns(next_table);
            let stacked: Vec<Vec<_>> = source
                .monomials()
                .iter()
                .map(|m| {
                    (0..nvars)
                        .flat_map(|l| {
                            let k = next_table.index_of(&m.times_var(l)).expect("degree t + 1");
                            next_span.reduced(&columns_next[k])
                        })
                        .collect()
                })
                .collect();
            let rank = crate::exactlin::rank_of_rows(&f, nvars * next_span.width(), &stacked);
            let saturated_dim = source.len() - rank;
            let ideal_dim = ring_dim(z.n(), t) - hz.value(t as i64) as usize + spans[t as usize].1.rank();
            if saturated_dim != ideal_dim {
                return Ok(false);
            }
        }
        Ok(true)
    })
}
