//! Complete intersections realized as grids, fat point schemes supported on
//! them, the closed form for the last shifts of `I_X^m`, and
//! Cayley-Bacharach checks.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Scalar};
use crate::polyring::{binomial, HomogeneousForm};
use crate::resolution::ShiftMultiset;
use crate::scheme::FatPointScheme;
use crate::separator::{separator_degrees, SeparatorProfile};

/// Type `(δ_1, ..., δ_n)` of a complete intersection, nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CIType {
    deltas: Vec<u32>,
}

impl CIType {
    pub fn new(deltas: Vec<u32>) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InvalidInput("complete intersection type is empty".into()));
        }
        if deltas.contains(&0) {
            return Err(Error::InvalidInput("complete intersection degrees must be positive".into()));
        }
        if deltas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput(format!(
                "complete intersection type {deltas:?} is not nondecreasing"
            )));
        }
        Ok(CIType { deltas })
    }

    pub fn deltas(&self) -> &[u32] {
        &self.deltas
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.deltas.len()
    }

    pub fn num_points(&self) -> usize {
        self.deltas.iter().map(|&d| d as usize).product()
    }
}

impl FromStr for CIType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let deltas = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad degree {x:?} in type {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CIType::new(deltas)
    }
}

impl fmt::Display for CIType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.deltas.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Axis values of a grid complete intersection; axis `i` carries the roots
/// of generator `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    field: FieldSpec,
    axes: Vec<Vec<Scalar>>,
}

impl GridSpec {
    pub fn new(field: FieldSpec, axes: Vec<Vec<Scalar>>) -> Result<Self> {
        field.validate()?;
        if axes.is_empty() || axes.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInput("every grid axis needs at least one value".into()));
        }
        for (i, axis) in axes.iter().enumerate() {
            if let Some(bad) = axis.iter().find(|c| c.field() != field) {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: bad.field(),
                });
            }
            for (a, x) in axis.iter().enumerate() {
                if axis[..a].contains(x) {
                    return Err(Error::InvalidInput(format!("value {x} repeated on axis {}", i + 1)));
                }
            }
        }
        Ok(GridSpec { field, axes })
    }

    pub fn from_i64(field: FieldSpec, axes: &[&[i64]]) -> Result<Self> {
        let axes = axes
            .iter()
            .map(|a| a.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        GridSpec::new(field, axes)
    }

    /// Axes `1, 2, ..., δ_i`.
    pub fn default_for(ci_type: &CIType, field: FieldSpec) -> Result<Self> {
        let axes = ci_type
            .deltas()
            .iter()
            .map(|&d| (1..=d as i64).map(|x| field.from_i64(x)).collect())
            .collect();
        GridSpec::new(field, axes)
    }

    /// Parses `"1,2;1,2,3"`: axes separated by `;`, values by `,`.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Self> {
        let axes = text
            .split(';')
            .map(|axis| axis.split(',').map(|x| field.parse_scalar(x.trim())).collect())
            .collect::<Result<Vec<_>>>()?;
        GridSpec::new(field, axes)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn axes(&self) -> &[Vec<Scalar>] {
        &self.axes
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    /// Axis sizes; the type of the complete intersection up to ordering.
    pub fn sizes(&self) -> Vec<u32> {
        self.axes.iter().map(|a| a.len() as u32).collect()
    }
}

/// Points `(1 : c_1 : ... : c_n)` over the product of the axes (first axis
/// outermost) and generators `Π_j (x_i - c_ij x_0)`.
pub fn grid_ci(spec: &GridSpec) -> Result<(FatPointScheme, Vec<HomogeneousForm>)> {
    let field = spec.field;
    let n = spec.n();
    let mut points: Vec<Vec<Scalar>> = vec![vec![field.one()]];
    for axis in &spec.axes {
        points = points
            .iter()
            .flat_map(|p| {
                axis.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c.clone());
                    q
                })
            })
            .collect();
    }
    let count = points.len();
    let scheme = FatPointScheme::new(n, field, points, vec![1; count])?;

    let x0 = HomogeneousForm::var(field, n + 1, 0);
    let mut generators = Vec::with_capacity(n);
    for (i, axis) in spec.axes.iter().enumerate() {
        let xi = HomogeneousForm::var(field, n + 1, i + 1);
        let mut g = HomogeneousForm::constant(field, n + 1, field.one());
        for c in axis {
            g = g.multiply(&xi.sub(&x0.scale(c))?)?;
        }
        generators.push(g);
    }
    Ok((scheme, generators))
}

/// Same support, every multiplicity `m`.
pub fn power_scheme(x: &FatPointScheme, m: u32) -> Result<FatPointScheme> {
    if !x.is_reduced() {
        return Err(Error::InvalidInput("power_scheme needs a reduced scheme".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("multiplicity must be positive".into()));
    }
    let points = x.points().iter().map(|p| p.coords().to_vec()).collect();
    FatPointScheme::new(x.n(), x.field(), points, vec![m; x.len()])
}

/// `{a_1 δ_1 + ... + a_n δ_n : a_i >= 1, Σ a_i = m + n - 1}`.
pub fn ci_power_shifts(ci_type: &CIType, m: u32) -> ShiftMultiset {
    let n = ci_type.n() as u32;
    let mut shifts = Vec::new();
    let mut parts = Vec::with_capacity(n as usize);
    compositions(m + n - 1, n, &mut parts, &mut |a| {
        shifts.push(a.iter().zip(ci_type.deltas()).map(|(x, d)| x * d).sum());
    });
    ShiftMultiset::new(shifts)
}

fn compositions(total: u32, parts: u32, prefix: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if parts == 1 {
        prefix.push(total);
        visit(prefix);
        prefix.pop();
        return;
    }
    for first in 1..=total.saturating_sub(parts - 1) {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, visit);
        prefix.pop();
    }
}

/// `C(m + n - 2, n - 1)`.
pub fn ci_rank(m: u32, n: usize) -> u64 {
    binomial(m as u64 + n as u64 - 2, n as u64 - 1) as u64
}

/// The CI shifts lowered by `n`: the separator degrees of every point of `mX`.
pub fn ci_separator_profile(ci_type: &CIType, m: u32) -> SeparatorProfile {
    let n = ci_type.n() as u32;
    SeparatorProfile::new(ci_power_shifts(ci_type, m).shifts().iter().map(|s| s - n).collect())
}

/// Every point of the homogeneous scheme `Z` on a grid CI of type `ci_type`
/// has separator degrees equal to the closed form.
pub fn verify_deg_ci(z: &FatPointScheme, ci_type: &CIType) -> Result<bool> {
    if !z.is_homogeneous() || z.is_empty() {
        return Err(Error::InvalidInput("verify_deg_ci needs a nonempty homogeneous scheme".into()));
    }
    if z.len() != ci_type.num_points() || z.n() != ci_type.n() {
        return Err(Error::InvalidInput(format!(
            "scheme with {} points in P^{} is not supported on a CI of type {ci_type}",
            z.len(),
            z.n()
        )));
    }
    let expected = ci_separator_profile(ci_type, z.mults()[0]);
    for i in 0..z.len() {
        if separator_degrees(z, i)? != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_two_points(z: &FatPointScheme) -> Result<()> {
    if z.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "Cayley-Bacharach check needs at least 2 points, got {}",
            z.len()
        )));
    }
    Ok(())
}

/// Cayley-Bacharach property of a reduced scheme: all separator degrees
/// agree. The Hilbert functions of `X \ {P}` are compared as well, and a
/// disagreement between the two criteria is reported as an error.
pub fn cbp_check(x: &FatPointScheme) -> Result<bool> {
    if !x.is_reduced() {
        return Err(Error::InvalidInput("cbp_check needs a reduced scheme".into()));
    }
    require_two_points(x)?;
    let mut degrees = Vec::with_capacity(x.len());
    let mut hfs = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        degrees.push(separator_degrees(x, i)?);
        hfs.push(x.reduce_multiplicity(i, 1)?.hilbert_function()?);
    }
    let by_degree = degrees.windows(2).all(|w| w[0] == w[1]);
    let by_hf = hfs.windows(2).all(|w| w[0] == w[1]);
    if by_degree != by_hf {
        return Err(Error::Inconsistent(format!(
            "separator degrees say {by_degree}, Hilbert functions of X minus a point say {by_hf}"
        )));
    }
    Ok(by_degree)
}

/// All schemes obtained by removing one whole fat point share a Hilbert function.
pub fn cbp_fat_removed_check(z: &FatPointScheme) -> Result<bool> {
    if !z.is_homogeneous() {
        return Err(Error::InvalidInput("cbp_fat_removed_check needs a homogeneous scheme".into()));
    }
    require_two_points(z)?;
    let first = z.reduce_multiplicity(0, z.mults()[0])?.hilbert_function()?;
    for i in 1..z.len() {
        if z.reduce_multiplicity(i, z.mults()[i])?.hilbert_function()? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The doubled CI(2,3) grid on default axes.
pub fn example2_scheme(field: FieldSpec) -> Result<FatPointScheme> {
    let ci_type = CIType::new(vec![2, 3])?;
    let (x, _) = grid_ci(&GridSpec::default_for(&ci_type, field)?)?;
    power_scheme(&x, 2)
}

/// CI(3,7) on axes `(1,2,3)`, `(1..7)` minus `(1:3:7)`, doubled; returns the
/// scheme and the index of `(1:3:6)`.
pub fn ci37_scheme(field: FieldSpec) -> Result<(FatPointScheme, usize)> {
    let ci_type = CIType::new(vec![3, 7])?;
    let (x, _) = grid_ci(&GridSpec::default_for(&ci_type, field)?)?;
    let removed = x.len() - 1;
    let y = x.reduce_multiplicity(removed, 1)?;
    let z = power_scheme(&y, 2)?;
    let target = [1, 3, 6].map(|c| field.from_i64(c));
    let index = z
        .points()
        .iter()
        .position(|p| p.coords() == target)
        .expect("(1:3:6) lies on the grid");
    Ok((z, index))
}

/// Triple points on the CI(2,3,4) grid with default axes.
pub fn ci234_scheme(field: FieldSpec) -> Result<FatPointScheme> {
    let ci_type = CIType::new(vec![2, 3, 4])?;
    let (x, _) = grid_ci(&GridSpec::default_for(&ci_type, field)?)?;
    power_scheme(&x, 3)
}
