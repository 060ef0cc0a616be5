//! Fat point schemes `Z = m_1 P_1 + ... + m_s P_s` in projective n-space.
//!
//! The degree-`t` part of `I_Z` is the kernel of the jet matrix: for every
//! point and every multi-index `alpha` of order `m_i - 1`, the row evaluates
//! `d^alpha` of each monomial at `P_i`. Vanishing of all order-`(m-1)`
//! partials at `P` is equivalent to membership in `I_P^m` (Euler's relation
//! takes care of lower orders), so point `i` contributes exactly
//! `C(m_i + n - 1, n)` rows once `t >= m_i - 1`. In lower degrees `(I_P^m)_t`
//! is zero and the order-`t` rows (all coefficients) are used instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{kernel_rows, rank_of_rows, DenseMatrix, Field, FieldSpec, Scalar};
use crate::polyring::{basis_size, binomial, monomial_basis, HomogeneousForm, Monomial, MonomialTable};
use crate::with_field;

/// A point of projective space, scaled so its first nonzero coordinate is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("all coordinates of a point are zero".into()))?;
        let inv = lead.inv().expect("nonzero");
        let coords = coords.iter().map(|c| c * &inv).collect();
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }
}

/// The scheme JSON file layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeJson {
    pub n: usize,
    pub field: FieldSpec,
    pub points: Vec<Vec<String>>,
    pub multiplicities: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatPointScheme {
    n: usize,
    field: FieldSpec,
    points: Vec<ProjectivePoint>,
    mults: Vec<u32>,
}

impl FatPointScheme {
    pub fn new(n: usize, field: FieldSpec, points: Vec<Vec<Scalar>>, mults: Vec<u32>) -> Result<Self> {
        field.validate()?;
        if n == 0 {
            return Err(Error::InvalidInput("ambient dimension must be at least 1".into()));
        }
        if points.len() != mults.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} multiplicities",
                points.len(),
                mults.len()
            )));
        }
        if let Some(k) = mults.iter().position(|&m| m == 0) {
            return Err(Error::InvalidInput(format!("multiplicity of point {} is zero", k + 1)));
        }
        let mut normalized: Vec<ProjectivePoint> = Vec::with_capacity(points.len());
        for (k, coords) in points.into_iter().enumerate() {
            if coords.len() != n + 1 {
                return Err(Error::InvalidInput(format!(
                    "point {} has {} coordinates, expected {}",
                    k + 1,
                    coords.len(),
                    n + 1
                )));
            }
            if let Some(bad) = coords.iter().find(|c| c.field() != field) {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: bad.field(),
                });
            }
            let p = ProjectivePoint::new(coords)?;
            if let Some(j) = normalized.iter().position(|q| *q == p) {
                return Err(Error::InvalidInput(format!("points {} and {} coincide", j + 1, k + 1)));
            }
            normalized.push(p);
        }
        Ok(FatPointScheme {
            n,
            field,
            points: normalized,
            mults,
        })
    }

    pub fn empty(n: usize, field: FieldSpec) -> Self {
        FatPointScheme {
            n,
            field,
            points: Vec::new(),
            mults: Vec::new(),
        }
    }

    /// Parses scheme JSON, optionally overriding the field it declares.
    pub fn from_json_str(text: &str, field_override: Option<FieldSpec>) -> Result<Self> {
        let parsed: SchemeJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("scheme JSON at line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_json(&parsed, field_override)
    }

    pub fn from_json(json: &SchemeJson, field_override: Option<FieldSpec>) -> Result<Self> {
        let field = field_override.unwrap_or(json.field);
        field.validate()?;
        let points = json
            .points
            .iter()
            .map(|p| p.iter().map(|c| field.parse_scalar(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.n, field, points, json.multiplicities.clone())
    }

    pub fn to_json(&self) -> SchemeJson {
        SchemeJson {
            n: self.n,
            field: self.field,
            points: self
                .points
                .iter()
                .map(|p| p.coords.iter().map(Scalar::to_string).collect())
                .collect(),
            multiplicities: self.mults.clone(),
        }
    }

    /// Re-reads the coordinates in another field. Only rational schemes (or a
    /// scheme already over the target field) can be converted.
    pub fn change_field(&self, field: FieldSpec) -> Result<Self> {
        if field == self.field {
            return Ok(self.clone());
        }
        if self.field != FieldSpec::Rational {
            return Err(Error::InvalidInput(format!("cannot move a scheme over {} to {field}", self.field)));
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                p.coords
                    .iter()
                    .map(|c| match c {
                        Scalar::Rational(q) => field.from_rational(q),
                        _ => unreachable!("rational scheme"),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, field, points, self.mults.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.mults.iter().all(|&m| m == 1)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.mults.windows(2).all(|w| w[0] == w[1])
    }

    /// `deg Z = sum_i C(m_i + n - 1, n)`.
    pub fn degree(&self) -> usize {
        self.mults.iter().map(|&m| fat_point_degree(self.n, m)).sum()
    }

    /// The bound used to cap Hilbert function stabilization: `sum m_i + 1`.
    pub fn t_cap(&self) -> u32 {
        self.mults.iter().sum::<u32>() + 1
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::OutOfRange {
                what: "point index",
                value: i,
                allowed: format!("0..{}", self.len()),
            });
        }
        Ok(())
    }

    /// `Z_{m_i - h}(P_i)`: lowers the multiplicity of point `i` by `h`,
    /// dropping the point from the support when `h = m_i`.
    pub fn reduce_multiplicity(&self, i: usize, h: u32) -> Result<Self> {
        self.check_index(i)?;
        let m = self.mults[i];
        if h > m {
            return Err(Error::OutOfRange {
                what: "multiplicity reduction",
                value: h as usize,
                allowed: format!("0..={m}"),
            });
        }
        let mut out = self.clone();
        if h == m {
            out.points.remove(i);
            out.mults.remove(i);
        } else {
            out.mults[i] = m - h;
        }
        Ok(out)
    }

    /// The jet matrix in degree `t`: rows `(i, alpha)` with `|alpha| = m_i - 1`,
    /// columns `monomial_basis(n + 1, t)`; its kernel is `(I_Z)_t`.
    pub fn jet_matrix(&self, t: u32) -> Result<DenseMatrix> {
        self.field.require_exceeds(t as u64)?;
        let table = MonomialTable::new(self.nvars(), t);
        Ok(with_field!(self.field, f => {
            let jets = Jets::new(&f, self);
            DenseMatrix::from_elems(&f, table.len(), &jets.rows(&table))
        }))
    }

    /// A basis of `(I_Z)_t`.
    pub fn ideal_basis(&self, t: u32) -> Result<Vec<HomogeneousForm>> {
        self.field.require_exceeds(t as u64)?;
        let table = MonomialTable::new(self.nvars(), t);
        Ok(with_field!(self.field, f => {
            let jets = Jets::new(&f, self);
            kernel_rows(&f, table.len(), &jets.rows(&table))
                .iter()
                .map(|v| HomogeneousForm::from_elems(&f, &table, v))
                .collect()
        }))
    }

    /// Whether `form` lies in `I_Z`.
    pub fn contains(&self, form: &HomogeneousForm) -> Result<bool> {
        if form.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: form.field(),
            });
        }
        if form.nvars() != self.nvars() {
            return Err(Error::Dimension(format!(
                "form in {} variables, scheme in {}",
                form.nvars(),
                self.nvars()
            )));
        }
        self.field.require_exceeds(form.degree() as u64)?;
        let table = MonomialTable::new(self.nvars(), form.degree());
        Ok(with_field!(self.field, f => {
            let jets = Jets::new(&f, self);
            let v = form.to_elems(&f, &table);
            jets.apply(&table, &v).iter().all(|x| f.is_zero(x))
        }))
    }

    pub fn hilbert_function(&self) -> Result<HilbertFunction> {
        if self.is_empty() {
            return Ok(HilbertFunction::zero());
        }
        self.field.require_exceeds(self.t_cap() as u64)?;
        with_field!(self.field, f => hilbert_function_in(&f, self))
    }
}

pub fn membership(form: &HomogeneousForm, scheme: &FatPointScheme) -> Result<bool> {
    scheme.contains(form)
}

/// `deg(mP) = C(m + n - 1, n)`.
pub fn fat_point_degree(n: usize, m: u32) -> usize {
    if m == 0 {
        return 0;
    }
    binomial(m as u64 + n as u64 - 1, n as u64) as usize
}

pub(crate) fn hilbert_function_in<F: Field>(field: &F, scheme: &FatPointScheme) -> Result<HilbertFunction> {
    let jets = Jets::new(field, scheme);
    let target = scheme.degree();
    let mut values = Vec::new();
    for t in 0..=scheme.t_cap() {
        let table = MonomialTable::new(scheme.nvars(), t);
        let h = rank_of_rows(field, table.len(), &jets.rows(&table));
        values.push(h as u64);
        if h == target {
            return Ok(HilbertFunction::from_values(values));
        }
    }
    Err(Error::Inconsistent(format!(
        "Hilbert function did not reach deg Z = {target} by degree {} over {}",
        scheme.t_cap(),
        scheme.field()
    )))
}

/// Hilbert function `H_Z(0..=t_stab)`; constant (equal to `stable_value`) afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertFunction {
    values: Vec<u64>,
    stable_value: u64,
    t_stab: u32,
}

impl HilbertFunction {
    /// The Hilbert function of the empty scheme.
    pub fn zero() -> Self {
        HilbertFunction {
            values: vec![0],
            stable_value: 0,
            t_stab: 0,
        }
    }

    /// Takes values whose last entry is the stable value; repeated trailing
    /// entries are trimmed so `t_stab` is the first degree reaching it.
    pub fn from_values(mut values: Vec<u64>) -> Self {
        if values.is_empty() {
            return Self::zero();
        }
        while values.len() > 1 && values[values.len() - 2] == values[values.len() - 1] {
            values.pop();
        }
        HilbertFunction {
            stable_value: *values.last().unwrap(),
            t_stab: values.len() as u32 - 1,
            values,
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn stable_value(&self) -> u64 {
        self.stable_value
    }

    pub fn t_stab(&self) -> u32 {
        self.t_stab
    }

    pub fn value(&self, t: i64) -> u64 {
        if t < 0 {
            0
        } else {
            self.values.get(t as usize).copied().unwrap_or(self.stable_value)
        }
    }

    /// `Delta H(t) = H(t) - H(t-1)` for `t = 0..=t_stab + 1` (the last entry is 0).
    pub fn delta(&self) -> Vec<i64> {
        (0..=self.t_stab as i64 + 1)
            .map(|t| self.value(t) as i64 - self.value(t - 1) as i64)
            .collect()
    }
}

pub fn delta_hf(h: &HilbertFunction) -> Vec<i64> {
    h.delta()
}

/// Jet evaluation data for one scheme over a concrete field.
pub(crate) struct Jets<F: Field> {
    field: F,
    nvars: usize,
    points: Vec<Vec<F::Elem>>,
    mults: Vec<u32>,
}

impl<F: Field> Jets<F> {
    pub fn new(field: &F, scheme: &FatPointScheme) -> Self {
        Jets {
            field: field.clone(),
            nvars: scheme.nvars(),
            points: scheme
                .points()
                .iter()
                .map(|p| p.coords().iter().map(|c| field.from_scalar(c).expect("scheme field")).collect())
                .collect(),
            mults: scheme.mults().to_vec(),
        }
    }

    pub fn mult(&self, i: usize) -> u32 {
        self.mults[i]
    }

    /// `(d^alpha x^beta)(P)`.
    fn entry(&self, point: &[F::Elem], powers: &[Vec<F::Elem>], alpha: &Monomial, beta: &Monomial) -> F::Elem {
        let f = &self.field;
        let mut acc = f.one();
        for k in 0..self.nvars {
            let (a, b) = (alpha.0[k], beta.0[k]);
            if a > b {
                return f.zero();
            }
            for j in 0..a {
                acc = f.mul(&acc, &f.from_i64((b - j) as i64));
            }
            let e = (b - a) as usize;
            if e > 0 {
                if f.is_zero(&point[k]) {
                    return f.zero();
                }
                acc = f.mul(&acc, &powers[k][e]);
            }
        }
        acc
    }

    fn powers(&self, point: &[F::Elem], t: u32) -> Vec<Vec<F::Elem>> {
        point
            .iter()
            .map(|c| {
                let mut pw = Vec::with_capacity(t as usize + 1);
                pw.push(self.field.one());
                for e in 1..=t as usize {
                    pw.push(self.field.mul(&pw[e - 1], c));
                }
                pw
            })
            .collect()
    }

    /// Rows of order `order` at point `i` over the monomials of `table`.
    pub fn point_rows(&self, i: usize, order: u32, table: &MonomialTable) -> Vec<Vec<F::Elem>> {
        let point = &self.points[i];
        let powers = self.powers(point, table.degree());
        monomial_basis(self.nvars, order)
            .iter()
            .map(|alpha| {
                table
                    .monomials()
                    .iter()
                    .map(|beta| self.entry(point, &powers, alpha, beta))
                    .collect()
            })
            .collect()
    }

    /// All jet rows in the degree of `table`, point by point. Below degree
    /// `m_i - 1` the order drops to the degree itself, where the partials are
    /// the coefficients up to nonzero factors.
    pub fn rows(&self, table: &MonomialTable) -> Vec<Vec<F::Elem>> {
        (0..self.points.len())
            .flat_map(|i| self.point_rows(i, (self.mults[i] - 1).min(table.degree()), table))
            .collect()
    }

    /// Jet rows as columns: entry `k` holds the image of monomial `k`.
    pub fn columns(&self, table: &MonomialTable) -> Vec<Vec<F::Elem>> {
        transpose(&self.rows(table), table.len())
    }

    /// The image of a coefficient vector under the jet matrix.
    pub fn apply(&self, table: &MonomialTable, coeffs: &[F::Elem]) -> Vec<F::Elem> {
        apply_rows(&self.field, &self.rows(table), coeffs)
    }
}

pub(crate) fn apply_rows<F: Field>(field: &F, rows: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    rows.iter()
        .map(|row| {
            row.iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                if field.is_zero(b) {
                    acc
                } else {
                    field.add(&acc, &field.mul(a, b))
                }
            })
        })
        .collect()
}

pub(crate) fn transpose<T: Clone>(rows: &[Vec<T>], width: usize) -> Vec<Vec<T>> {
    let mut cols = vec![Vec::with_capacity(rows.len()); width];
    for row in rows {
        for (c, x) in cols.iter_mut().zip(row) {
            c.push(x.clone());
        }
    }
    cols
}

/// `dim R_t = C(t + n, n)` for `R = k[x_0..x_n]`.
pub fn ring_dim(n: usize, t: u32) -> usize {
    basis_size(n + 1, t)
}
