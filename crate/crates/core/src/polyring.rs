//! Homogeneous polynomials in `x_0, ..., x_n`.
//!
//! Monomials of a fixed degree are always listed in graded-lexicographic
//! order with `x_0 > x_1 > ... > x_n`, largest first. Coefficient vectors,
//! jet matrix columns and every basis in this crate use that order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlin::{Field, FieldSpec, Scalar};

/// Exponent vector of a monomial. The derived ordering is lexicographic in
/// the exponents, which for a fixed degree is graded-lex with `x_0` largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, k: usize) -> Monomial {
        let mut e = self.0.clone();
        e[k] += 1;
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, "*")?;
            }
            match e {
                1 => write!(f, "x{k}")?,
                _ => write!(f, "x{k}^{e}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Derivative orders, one per variable.
pub type MultiIndex = Monomial;

/// All monomials of degree `t` in `nvars` variables, graded-lex descending.
pub fn monomial_basis(nvars: usize, t: u32) -> Vec<Monomial> {
    fn fill(prefix: &mut Vec<u32>, left: usize, t: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(t);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=t).rev() {
            prefix.push(e);
            fill(prefix, left - 1, t - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        fill(&mut Vec::with_capacity(nvars), nvars, t, &mut out);
    }
    out
}

/// `C(n, k)` as `u128`; panics on overflow rather than wrapping.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128).expect("binomial overflow") / (i as u128 + 1);
    }
    acc
}

/// Number of monomials of degree `t` in `nvars` variables.
pub fn basis_size(nvars: usize, t: u32) -> usize {
    if nvars == 0 {
        return 0;
    }
    binomial(t as u64 + nvars as u64 - 1, nvars as u64 - 1) as usize
}

/// A degree-`t` monomial basis with reverse lookup.
#[derive(Debug, Clone)]
pub struct MonomialTable {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialTable {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let monomials = monomial_basis(nvars, degree);
        let index = monomials.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        MonomialTable {
            degree,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Product of a coefficient vector over `from` by the monomial `m`, as a
/// coefficient vector over `to` (which must have degree `from.degree() + deg m`).
pub(crate) fn shift_by_monomial<F: Field>(
    field: &F,
    coeffs: &[F::Elem],
    from: &MonomialTable,
    to: &MonomialTable,
    m: &Monomial,
) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); to.len()];
    for (c, mono) in coeffs.iter().zip(from.monomials()) {
        if !field.is_zero(c) {
            let k = to.index_of(&mono.mul(m)).expect("degrees match");
            out[k] = c.clone();
        }
    }
    out
}

/// A homogeneous form with exact coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousForm {
    nvars: usize,
    degree: u32,
    field: FieldSpec,
    coeffs: BTreeMap<Monomial, Scalar>,
}

impl HomogeneousForm {
    pub fn zero(field: FieldSpec, nvars: usize, degree: u32) -> Self {
        HomogeneousForm {
            nvars,
            degree,
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn monomial(field: FieldSpec, m: Monomial, c: Scalar) -> Self {
        let mut f = Self::zero(field, m.nvars(), m.degree());
        if !c.is_zero() {
            f.coeffs.insert(m, c);
        }
        f
    }

    pub fn var(field: FieldSpec, nvars: usize, k: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, k), field.one())
    }

    /// `sum_k coeffs[k] * x_k`.
    pub fn linear(field: FieldSpec, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        Self::from_terms(field, n, 1, coeffs.iter().enumerate().map(|(k, c)| (Monomial::var(n, k), c.clone())))
            .expect("linear terms are homogeneous")
    }

    /// Builds a form from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        field: FieldSpec,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut f = Self::zero(field, nvars, degree);
        for (m, c) in terms {
            if m.nvars() != nvars || m.degree() != degree {
                return Err(Error::InvalidInput(format!("monomial {m} does not belong to degree {degree} in {nvars} variables")));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: c.field(),
                });
            }
            f.add_term(m, &c);
        }
        Ok(f)
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        let sum = match self.coeffs.get(&m) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms, largest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.coeffs.iter().rev()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.coeffs.keys().next_back()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidInput("adding forms of different degrees".into()));
        }
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.nvars, self.degree);
        if !c.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-&self.field.one()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::InvalidInput(format!(
                "forms in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field, self.nvars, self.degree + other.degree);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Iterated partial derivative `d^alpha F`. Orders beyond the degree give
    /// the zero form (of degree 0).
    pub fn partial(&self, alpha: &MultiIndex) -> Self {
        let order = alpha.degree();
        if order > self.degree {
            return Self::zero(self.field, self.nvars, 0);
        }
        let mut out = Self::zero(self.field, self.nvars, self.degree - order);
        for (m, c) in &self.coeffs {
            if !alpha.divides(m) {
                continue;
            }
            let mut factor = BigInt::from(1);
            let mut rest = Vec::with_capacity(self.nvars);
            for (&b, &a) in m.0.iter().zip(&alpha.0) {
                for j in 0..a {
                    factor *= b - j;
                }
                rest.push(b - a);
            }
            out.add_term(Monomial(rest), &(c * &self.field.from_bigint(&factor)));
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, form has {} variables",
                point.len(),
                self.nvars
            )));
        }
        if let Some(bad) = point.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: bad.field(),
            });
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.coeffs {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    term = &term * x;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Coefficients in `monomial_basis(nvars, degree)` order.
    pub fn coeff_vector(&self) -> Vec<Scalar> {
        monomial_basis(self.nvars, self.degree).iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coeff_vector(field: FieldSpec, nvars: usize, degree: u32, coeffs: &[Scalar]) -> Result<Self> {
        let basis = monomial_basis(nvars, degree);
        if basis.len() != coeffs.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                basis.len()
            )));
        }
        Self::from_terms(field, nvars, degree, basis.into_iter().zip(coeffs.iter().cloned()))
    }

    pub(crate) fn to_elems<F: Field>(&self, field: &F, table: &MonomialTable) -> Vec<F::Elem> {
        let mut out = vec![field.zero(); table.len()];
        for (m, c) in &self.coeffs {
            out[table.index_of(m).expect("monomial of the table degree")] =
                field.from_scalar(c).expect("form field matches");
        }
        out
    }

    pub(crate) fn from_elems<F: Field>(field: &F, table: &MonomialTable, coeffs: &[F::Elem]) -> Self {
        let spec = field.spec();
        let nvars = table.monomials().first().map_or(0, Monomial::nvars);
        let mut out = Self::zero(spec, nvars, table.degree());
        for (m, c) in table.monomials().iter().zip(coeffs) {
            if !field.is_zero(c) {
                out.coeffs.insert(m.clone(), field.to_scalar(c));
            }
        }
        out
    }

    /// `[[exponents], "coefficient"]` pairs, largest monomial first.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(m, c)| json!([m.0, c.to_string()]))
                .collect(),
        )
    }

    pub fn from_json(field: FieldSpec, nvars: usize, value: &Value) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("malformed form: {why}"));
        let terms = value.as_array().ok_or_else(|| bad("expected an array of terms"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for term in terms {
            let pair = term.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term is not a pair"))?;
            let exps: Vec<u32> = serde_json::from_value(pair[0].clone()).map_err(|_| bad("bad exponent list"))?;
            let coeff = pair[1].as_str().ok_or_else(|| bad("coefficient is not a string"))?;
            parsed.push((Monomial(exps), field.parse_scalar(coeff)?));
        }
        let degree = parsed.first().map_or(0, |(m, _)| m.degree());
        Self::from_terms(field, nvars, degree, parsed)
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let text = c.to_string();
            let (sign, mag) = match text.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", text),
            };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            let is_unit = mag == "1";
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else if is_unit {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn x(k: usize) -> HomogeneousForm {
        HomogeneousForm::var(Q, 3, k)
    }

    fn c(v: i64) -> Scalar {
        Q.from_i64(v)
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(monomial_basis(3, 2).len(), 6);
        assert_eq!(monomial_basis(1, 5), vec![Monomial(vec![5])]);
        assert_eq!(monomial_basis(4, 3).len(), 20);
        let b = monomial_basis(3, 2);
        let shown: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["x0^2", "x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"]);
    }

    #[test]
    fn partial_examples() {
        let f = x(0).multiply(&x(0)).unwrap();
        assert_eq!(f.partial(&Monomial(vec![2, 0, 0])), HomogeneousForm::constant(Q, 3, c(2)));
        let g = x(0).multiply(&x(1)).unwrap();
        assert_eq!(g.partial(&Monomial(vec![1, 1, 0])), HomogeneousForm::constant(Q, 3, c(1)));
        assert!(g.partial(&Monomial(vec![3, 0, 0])).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let p = [c(1), c(0), c(0)];
        assert!(x(1).evaluate(&p).unwrap().is_zero());
        assert_eq!(x(0).evaluate(&p).unwrap(), c(1));
        let l = x(1).sub(&x(0).scale(&c(2))).unwrap();
        assert!(l.evaluate(&[c(1), c(2), c(5)]).unwrap().is_zero());
        assert!(l.evaluate(&[c(1), c(2)]).is_err());
    }

    #[test]
    fn multiply_examples() {
        let one = HomogeneousForm::constant(Q, 3, c(1));
        assert_eq!(x(1).multiply(&one).unwrap(), x(1));
        let prod = x(1).multiply(&x(1).sub(&x(0)).unwrap()).unwrap();
        let expect = x(1).multiply(&x(1)).unwrap().sub(&x(0).multiply(&x(1)).unwrap()).unwrap();
        assert_eq!(prod, expect);
        assert_eq!(prod.to_string(), "-x0*x1 + x1^2");
        let l = x(0).add(&x(1)).unwrap().add(&x(2)).unwrap();
        let seventh = (1..7).fold(l.clone(), |acc, _| acc.multiply(&l).unwrap());
        assert_eq!(seventh.degree(), 7);
    }

    #[test]
    fn coeff_vector_examples() {
        assert!(HomogeneousForm::zero(Q, 3, 2).coeff_vector().iter().all(Scalar::is_zero));
        let sq = x(0).multiply(&x(0)).unwrap();
        assert_eq!(sq.coeff_vector(), vec![c(1), c(0), c(0), c(0), c(0), c(0)]);
    }

    #[test]
    fn json_round_trip() {
        let f = x(0).multiply(&x(2)).unwrap().sub(&x(1).multiply(&x(1)).unwrap().scale(&Q.parse_scalar("3/2").unwrap())).unwrap();
        let v = f.to_json();
        assert_eq!(v, json!([[[1, 0, 1], "1"], [[0, 2, 0], "-3/2"]]));
        assert_eq!(HomogeneousForm::from_json(Q, 3, &v).unwrap(), f);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(basis_size(3, 20), 231);
    }
}
