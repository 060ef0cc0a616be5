//! Artinian reduction, socle, and the shifts of the last syzygy module.
//!
//! For a generic linear form `L`, `A = R/(I_Z, L)` has Hilbert function
//! `ΔH_Z`, and the socle of `A` in degree `t` has dimension
//! `β_{n-1, n+t}(I_Z)`. Since `(I_Z)_t` is the kernel of the jet map
//! `ψ_t: R_t -> k^{deg Z}`, `A_t` is computed as `ψ_t(R_t) / ψ_t(L R_{t-1})`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{rank_of_rows, Field, FieldSpec, RowBasis};
use crate::polyring::{binomial, monomial_basis, HomogeneousForm, Monomial};
use crate::scheme::{FatPointScheme, HilbertFunction};
use crate::separator::{nu, separator_degrees, SeparatorProfile};
use crate::with_field;

/// Number of random linear forms tried before giving up on genericity.
pub const MAX_ATTEMPTS: usize = 32;

/// `A = R/(I_Z, L)` with monomial bases per degree and its socle dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinianAlgebra {
    pub linear_form: HomogeneousForm,
    pub bases: Vec<Vec<Monomial>>,
    pub top_degree: u32,
    pub socle: Vec<usize>,
    pub attempts: usize,
}

impl ArtinianAlgebra {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Nonzero socle dimensions by degree.
    pub fn socle_dims(&self) -> BTreeMap<u32, usize> {
        self.socle
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(t, &d)| (t as u32, d))
            .collect()
    }
}

/// Nondecreasing multiset of shifts `j` with `R(-j)` in the last syzygy module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ShiftMultiset {
    shifts: Vec<u32>,
}

impl ShiftMultiset {
    pub fn new(mut shifts: Vec<u32>) -> Self {
        shifts.sort_unstable();
        ShiftMultiset { shifts }
    }

    pub fn shifts(&self) -> &[u32] {
        &self.shifts
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Multiset containment of `other` in `self`.
    pub fn contains_all(&self, other: &[u32]) -> bool {
        let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
        for &s in &self.shifts {
            *counts.entry(s).or_default() += 1;
        }
        for &s in other {
            let c = counts.entry(s).or_default();
            *c -= 1;
            if *c < 0 {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Display for ShiftMultiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.shifts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A numerical sequence `h_0, h_1, ...` to be tested against Macaulay's bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct OSequence {
    pub values: Vec<i64>,
}

impl OSequence {
    pub fn new(values: Vec<i64>) -> Self {
        OSequence { values }
    }
}

fn sample_coefficient(rng: &mut ChaCha8Rng, field: FieldSpec) -> i64 {
    match field {
        FieldSpec::Prime { p } => rng.gen_range(1..=(p - 1).min(1_000_000)) as i64,
        FieldSpec::Rational => rng.gen_range(1..=100),
    }
}

/// Linear forms to try, as coefficient vectors. Any form vanishing at no
/// point of the support is a nonzerodivisor and yields the same socle, so
/// over the rationals the coordinate forms come first: they keep the chart
/// coordinates small. Then come seeded random forms.
fn candidate_forms(field: FieldSpec, nvars: usize, seed: u64) -> impl Iterator<Item = Vec<i64>> {
    let coordinate = match field {
        FieldSpec::Rational => nvars,
        FieldSpec::Prime { .. } => 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..coordinate)
        .map(move |k| (0..nvars).map(|j| (j == k) as i64).collect())
        .chain((0..MAX_ATTEMPTS).map(move |_| (0..nvars).map(|_| sample_coefficient(&mut rng, field)).collect()))
}

/// Reduces `R/I_Z` by a seeded random linear form, accepting the first form
/// whose quotient has Hilbert function `ΔH_Z`.
pub fn artinian_reduction(z: &FatPointScheme, seed: u64) -> Result<ArtinianAlgebra> {
    if z.is_empty() {
        return Err(Error::InvalidInput("artinian reduction of the empty scheme".into()));
    }
    let h = z.hilbert_function()?;
    z.field().require_exceeds(h.t_stab() as u64 + 1)?;
    for (attempt, coeffs) in candidate_forms(z.field(), z.nvars(), seed).enumerate() {
        let reduced = with_field!(z.field(), f => reduce_by(&f, z, &h, &coeffs));
        if let Some((bases, socle)) = reduced {
            let linear: Vec<_> = coeffs.iter().map(|&c| z.field().from_i64(c)).collect();
            return Ok(ArtinianAlgebra {
                linear_form: HomogeneousForm::linear(z.field(), &linear),
                top_degree: h.t_stab(),
                bases,
                socle,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::GenericityFailure {
        attempts: MAX_ATTEMPTS,
        field: z.field(),
    })
}

/// Bases of `A_t` for `t <= t_stab + 1` and socle dimensions for `t <= t_stab`,
/// or `None` if `L` is a zero divisor.
///
/// Works in the affine chart `L = 1`: with `j0` a variable where `L` has a
/// nonzero coefficient and `y` the remaining variables, `A_t` is `F_t / F_{t-1}`
/// where `F_t` is the span of the affine jets (all partials of order below
/// `m_i` at every point) of the monomials in `y` of degree at most `t`.
fn reduce_by<F: Field>(
    f: &F,
    z: &FatPointScheme,
    h: &HilbertFunction,
    coeffs: &[i64],
) -> Option<(Vec<Vec<Monomial>>, Vec<usize>)> {
    let nvars = z.nvars();
    let n = z.n();
    let l: Vec<F::Elem> = coeffs.iter().map(|&c| f.from_i64(c)).collect();
    let j0 = l.iter().position(|c| !f.is_zero(c))?;
    let others: Vec<usize> = (0..nvars).filter(|&k| k != j0).collect();
    let top = h.t_stab();

    let mut charts = Vec::with_capacity(z.len());
    for (p, &m) in z.points().iter().zip(z.mults()) {
        let coords: Vec<F::Elem> = p.coords().iter().map(|c| f.from_scalar(c).expect("scheme field")).collect();
        let lp = coords.iter().zip(&l).fold(f.zero(), |acc, (x, c)| f.add(&acc, &f.mul(x, c)));
        if f.is_zero(&lp) {
            return None;
        }
        let inv = f.inv(&lp);
        let powers: Vec<Vec<F::Elem>> = others
            .iter()
            .map(|&k| {
                let a = f.mul(&coords[k], &inv);
                let mut pw = vec![f.one()];
                for e in 1..=top as usize + 1 {
                    pw.push(f.mul(&pw[e - 1], &a));
                }
                pw
            })
            .collect();
        let orders: Vec<Monomial> = (0..m).flat_map(|o| monomial_basis(n, o)).collect();
        charts.push((powers, orders));
    }
    let width = z.degree();
    let jet = |gamma: &Monomial| -> Vec<F::Elem> {
        let mut v = Vec::with_capacity(width);
        for (powers, orders) in &charts {
            for alpha in orders {
                let mut acc = f.one();
                for k in 0..n {
                    let (a, g) = (alpha.0[k], gamma.0[k]);
                    if a > g {
                        acc = f.zero();
                        break;
                    }
                    for j in 0..a {
                        acc = f.mul(&acc, &f.from_i64((g - j) as i64));
                    }
                    acc = f.mul(&acc, &powers[k][(g - a) as usize]);
                }
                v.push(acc);
            }
        }
        v
    };
    let to_x = |gamma: &Monomial| -> Monomial {
        let mut e = vec![0; nvars];
        for (k, &x) in others.iter().zip(gamma.exponents()) {
            e[*k] = x;
        }
        Monomial(e)
    };

    let mut span = RowBasis::new(f.clone(), width);
    let mut bases: Vec<Vec<Monomial>> = Vec::new();
    let mut affine_bases: Vec<Vec<Monomial>> = Vec::new();
    let mut socle = Vec::new();
    for t in 0..=top + 1 {
        if let Some(prev) = affine_bases.last() {
            // Socle of degree t - 1: kernel of b -> (y_k b mod F_{t-1})_k.
            let stacked: Vec<Vec<F::Elem>> = prev
                .iter()
                .map(|b| (0..n).flat_map(|k| span.reduced(&jet(&b.times_var(k)))).collect())
                .collect();
            socle.push(prev.len() - rank_of_rows(f, n * width, &stacked));
        }
        let mut basis = Vec::new();
        if !span.is_full() {
            for gamma in monomial_basis(n, t) {
                if span.insert(jet(&gamma)) {
                    basis.push(gamma);
                }
            }
        }
        let expected = h.value(t as i64) - h.value(t as i64 - 1);
        if basis.len() as u64 != expected {
            return None;
        }
        bases.push(basis.iter().map(to_x).collect());
        affine_bases.push(basis);
    }
    Some((bases, socle))
}

/// Nonzero socle dimensions of the artinian reduction, by degree.
pub fn socle_dims(z: &FatPointScheme, seed: u64) -> Result<BTreeMap<u32, usize>> {
    Ok(artinian_reduction(z, seed)?.socle_dims())
}

/// `B_{n-1}`: shift `t + n` with multiplicity `dim socle_t`.
pub fn last_betti_shifts(z: &FatPointScheme, seed: u64) -> Result<ShiftMultiset> {
    Ok(shifts_from_socle(&artinian_reduction(z, seed)?, z.n()))
}

pub fn shifts_from_socle(a: &ArtinianAlgebra, n: usize) -> ShiftMultiset {
    ShiftMultiset::new(
        a.socle
            .iter()
            .enumerate()
            .flat_map(|(t, &d)| std::iter::repeat_n(t as u32 + n as u32, d))
            .collect(),
    )
}

/// All nondecreasing `tau`-tuples of shifts drawn from `b`, each lowered by `n`.
pub fn socle_vectors(b: &ShiftMultiset, tau: usize, n: usize) -> Result<BTreeSet<Vec<u32>>> {
    if tau > b.len() {
        return Err(Error::OutOfRange {
            what: "socle vector length",
            value: tau,
            allowed: format!("0..={}", b.len()),
        });
    }
    let lowered: Vec<u32> = b
        .shifts()
        .iter()
        .map(|&s| {
            s.checked_sub(n as u32)
                .ok_or_else(|| Error::InvalidInput(format!("shift {s} is below n = {n}")))
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeSet::new();
    let mut chosen = Vec::with_capacity(tau);
    choose(&lowered, 0, tau, &mut chosen, &mut out);
    Ok(out)
}

fn choose(items: &[u32], from: usize, left: usize, chosen: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
    if left == 0 {
        out.insert(chosen.clone());
        return;
    }
    for k in from..=items.len() - left {
        if k > from && items[k] == items[k - 1] {
            continue;
        }
        chosen.push(items[k]);
        choose(items, k + 1, left - 1, chosen, out);
        chosen.pop();
    }
}

/// Macaulay's bound `a^<t>`.
pub fn macaulay_bound(a: u64, t: u32) -> u64 {
    let mut rest = a;
    let mut total = 0u64;
    let mut j = t as u64;
    while rest > 0 && j > 0 {
        let mut k = j;
        while binomial(k + 1, j) as u64 <= rest {
            k += 1;
        }
        rest -= binomial(k, j) as u64;
        total += binomial(k + 1, j + 1) as u64;
        j -= 1;
    }
    total
}

/// `h_0 = 1`, all entries nonnegative, and `h_{t+1} <= h_t^<t>` for `t >= 1`.
pub fn is_o_sequence(h: &OSequence) -> bool {
    let v = &h.values;
    if v.first() != Some(&1) || v.iter().any(|&x| x < 0) {
        return false;
    }
    (1..v.len().saturating_sub(1)).all(|t| {
        let next = v[t + 1] as u64;
        if v[t] == 0 {
            next == 0
        } else {
            next <= macaulay_bound(v[t] as u64, t as u32)
        }
    })
}

/// `H_d(t) = H(t) - #{d_j <= t}` is a zero-dimensional differentiable
/// O-sequence. A tuple that removes everything (`H_d` identically zero)
/// leaves the empty scheme and is accepted.
pub fn permissible_check(h: &HilbertFunction, d: &[u32]) -> bool {
    let profile = SeparatorProfile::new(d.to_vec());
    let top = h.t_stab().max(d.iter().copied().max().unwrap_or(0)) as i64 + 1;
    let hd: Vec<i64> = (0..=top)
        .map(|t| h.value(t) as i64 - profile.count_up_to(t) as i64)
        .collect();
    if hd.iter().any(|&x| x < 0) {
        return false;
    }
    if hd.iter().all(|&x| x == 0) {
        return true;
    }
    let delta: Vec<i64> = (0..hd.len())
        .map(|t| hd[t] - if t == 0 { 0 } else { hd[t - 1] })
        .collect();
    is_o_sequence(&OSequence::new(delta))
}

/// Shifted separator degrees `{d_j + n}` lie in `B_{n-1}` as a multiset.
pub fn shifts_contain_profile(b: &ShiftMultiset, profile: &SeparatorProfile, n: usize) -> bool {
    let shifted: Vec<u32> = profile.degrees().iter().map(|&d| d + n as u32).collect();
    b.contains_all(&shifted)
}

/// Every socle vector of length `|profile|` is permissible for `h`, and the
/// profile itself is a socle vector.
pub fn socle_vectors_permissible(
    h: &HilbertFunction,
    b: &ShiftMultiset,
    profile: &SeparatorProfile,
    n: usize,
) -> Result<bool> {
    let vectors = socle_vectors(b, profile.len(), n)?;
    Ok(vectors.contains(profile.degrees()) && vectors.iter().all(|v| permissible_check(h, v)))
}

/// `|B_{n-1}| >= C(m_max + n - 2, n - 1)`.
pub fn rank_bound_holds(b: &ShiftMultiset, n: usize, max_mult: u32) -> bool {
    b.len() as u128 >= binomial(max_mult as u64 + n as u64 - 2, n as u64 - 1)
}

pub fn verify_teofat(z: &FatPointScheme, i: usize, seed: u64) -> Result<bool> {
    let profile = separator_degrees(z, i)?;
    Ok(shifts_contain_profile(&last_betti_shifts(z, seed)?, &profile, z.n()))
}

pub fn verify_rank_bound(z: &FatPointScheme, seed: u64) -> Result<bool> {
    let b = last_betti_shifts(z, seed)?;
    let max_mult = z.mults().iter().copied().max().unwrap_or(0);
    Ok(rank_bound_holds(&b, z.n(), max_mult))
}

pub fn verify_socle_subset_permissible(z: &FatPointScheme, i: usize, seed: u64) -> Result<bool> {
    let profile = separator_degrees(z, i)?;
    debug_assert_eq!(profile.len(), nu(z, i)?);
    let b = last_betti_shifts(z, seed)?;
    socle_vectors_permissible(&z.hilbert_function()?, &b, &profile, z.n())
}
