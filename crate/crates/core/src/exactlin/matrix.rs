use super::{complement_indices, kernel_rows, rank_of_rows, Field, FieldSpec, Scalar};
use crate::error::{Error, Result};
use crate::with_field;

/// Dense row-major matrix over one exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch {
                expected: field,
                found: bad.field(),
            });
        }
        Ok(DenseMatrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("row of length {} in a matrix with {cols} columns", r.len())));
        }
        Self::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows)
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for k in 0..size {
            m.entries[k * size + k] = field.one();
        }
        m
    }

    pub(crate) fn from_elems<F: Field>(field: &F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        DenseMatrix {
            rows: rows.len(),
            cols,
            field: field.spec(),
            entries: rows.iter().flat_map(|r| r.iter().map(|x| field.to_scalar(x))).collect(),
        }
    }

    pub(crate) fn to_elems<F: Field>(&self, field: &F) -> Vec<Vec<F::Elem>> {
        self.entries
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|r| r.iter().map(|x| field.from_scalar(x).expect("field checked on construction")).collect())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        DenseMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        check_fields(self.field, std::iter::once(v))?;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        with_field!(self.field, f => rank_of_rows(&f, self.cols, &self.to_elems(&f)))
    }

    /// Basis of the right null space; `cols - rank` vectors, read off the
    /// reduced row echelon form (one per free column, left to right).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        with_field!(self.field, f => {
            kernel_rows(&f, self.cols, &self.to_elems(&f))
                .iter()
                .map(|v| v.iter().map(|x| f.to_scalar(x)).collect())
                .collect()
        })
    }
}

fn check_fields<'a>(field: FieldSpec, vectors: impl IntoIterator<Item = &'a [Scalar]>) -> Result<()> {
    for v in vectors {
        if let Some(bad) = v.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch {
                expected: field,
                found: bad.field(),
            });
        }
    }
    Ok(())
}

/// Vectors of `ambient` whose classes extend `sub` to a basis of `span(ambient)`,
/// selected first-fit in the given order.
pub fn complement_basis(field: FieldSpec, ambient: &[Vec<Scalar>], sub: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let width = ambient.iter().chain(sub).map(Vec::len).next().unwrap_or(0);
    if ambient.iter().chain(sub).any(|v| v.len() != width) {
        return Err(Error::Dimension("vectors of different lengths".into()));
    }
    check_fields(field, ambient.iter().chain(sub).map(Vec::as_slice))?;
    let picked = with_field!(field, f => {
        let conv = |vs: &[Vec<Scalar>]| -> Vec<Vec<_>> {
            vs.iter().map(|v| v.iter().map(|x| f.from_scalar(x).unwrap()).collect()).collect()
        };
        complement_indices(&f, width, &conv(ambient), &conv(sub))?
    });
    Ok(picked.into_iter().map(|k| ambient[k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn unit(k: usize, n: usize) -> Vec<Scalar> {
        (0..n).map(|j| Q.from_i64((j == k) as i64)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(DenseMatrix::identity(Q, 3).rank(), 3);
        assert_eq!(DenseMatrix::zeros(Q, 2, 3).rank(), 0);
        assert_eq!(DenseMatrix::from_i64_rows(Q, &[&[1, 2], &[2, 4]]).unwrap().rank(), 1);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let entries = vec![Q.one(), FieldSpec::default().one()];
        let err = DenseMatrix::new(Q, 1, 2, entries).unwrap_err();
        assert!(matches!(err, Error::FieldMismatch { .. }));
    }

    #[test]
    fn kernel_examples() {
        assert!(DenseMatrix::identity(Q, 2).kernel_basis().is_empty());

        let m = DenseMatrix::from_i64_rows(Q, &[&[1, -1]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![Q.one(), Q.one()]]);

        let m = DenseMatrix::from_i64_rows(Q, &[&[1, 2, 3]]).unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn complement_examples() {
        let basis: Vec<_> = (0..3).map(|k| unit(k, 3)).collect();
        let out = complement_basis(Q, &basis, &[unit(0, 3)]).unwrap();
        assert_eq!(out, vec![unit(1, 3), unit(2, 3)]);

        assert!(complement_basis(Q, &basis, &basis).unwrap().is_empty());

        let e1 = unit(0, 2);
        let e12 = vec![Q.one(), Q.one()];
        let ambient = vec![e1.clone(), e12.clone()];
        let out = complement_basis(Q, &ambient, &[]).unwrap();
        assert_eq!(out, ambient);
        let joined = DenseMatrix::from_rows(Q, 2, out).unwrap();
        assert_eq!(joined.rank(), 2);
    }

    #[test]
    fn complement_containment_error() {
        let err = complement_basis(Q, &[unit(0, 3)], &[unit(2, 3)]).unwrap_err();
        assert_eq!(err, Error::NotContained { index: 0 });
    }
}
