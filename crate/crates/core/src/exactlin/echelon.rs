use super::Field;
use crate::error::{Error, Result};

/// An incrementally built semi-echelon basis of a subspace of `F^width`.
///
/// Every stored row has a pivot entry equal to one and is zero at the pivot
/// columns of all rows stored before it. Reducing a vector against the rows in
/// insertion order therefore clears every pivot column, and the residual is a
/// canonical representative of the vector modulo the span.
#[derive(Debug, Clone)]
pub struct RowBasis<F: Field> {
    field: F,
    width: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowBasis<F> {
    pub fn new(field: F, width: usize) -> Self {
        RowBasis {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts multiples of the stored rows so that every pivot column of `v` is zero.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        debug_assert_eq!(v.len(), self.width);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if !self.field.is_zero(&v[piv]) {
                let c = v[piv].clone();
                self.field.sub_scaled(v, &c, row, piv);
            }
        }
    }

    pub fn reduced(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let w = self.reduced(v);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the basis. Returns `false` (and stores nothing) when `v` is
    /// already in the span.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        self.push_reduced(v)
    }

    /// Like [`insert`](Self::insert) for a vector already reduced against this basis.
    pub fn push_reduced(&mut self, mut v: Vec<F::Elem>) -> bool {
        let Some(piv) = v.iter().position(|x| !self.field.is_zero(x)) else {
            return false;
        };
        if !self.field.is_one(&v[piv]) {
            let inv = self.field.inv(&v[piv]);
            self.field.scale(&mut v[piv..], &inv);
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    /// Reduced row echelon form: rows sorted by pivot column, every pivot
    /// column zero outside its own row.
    pub fn into_rref(self) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
        let RowBasis {
            field,
            mut rows,
            pivots,
            ..
        } = self;
        // Row k is already zero at the pivots of rows before it; clear the
        // pivots of later rows, last row first.
        for k in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(k + 1);
            let row = &mut head[k];
            for (later, &piv) in tail.iter().zip(&pivots[k + 1..]) {
                if !field.is_zero(&row[piv]) {
                    let c = row[piv].clone();
                    field.sub_scaled(row, &c, later, piv);
                }
            }
        }
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&k| pivots[k]);
        let mut sorted_rows = Vec::with_capacity(rows.len());
        let mut slots: Vec<Option<Vec<F::Elem>>> = rows.into_iter().map(Some).collect();
        for &k in &order {
            sorted_rows.push(slots[k].take().expect("row taken once"));
        }
        let sorted_pivots = order.iter().map(|&k| pivots[k]).collect();
        (sorted_rows, sorted_pivots)
    }
}

pub fn rank_of_rows<F: Field>(field: &F, width: usize, rows: &[Vec<F::Elem>]) -> usize {
    let mut basis = RowBasis::new(field.clone(), width);
    for row in rows {
        basis.insert(row.clone());
        if basis.is_full() {
            break;
        }
    }
    basis.rank()
}

/// Basis of the right null space, one vector per non-pivot column (in
/// increasing column order) of the reduced row echelon form.
pub fn kernel_rows<F: Field>(field: &F, width: usize, rows: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let mut basis = RowBasis::new(field.clone(), width);
    for row in rows {
        basis.insert(row.clone());
        if basis.is_full() {
            return Vec::new();
        }
    }
    let (rref, pivots) = basis.into_rref();
    let mut is_pivot = vec![false; width];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..width)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); width];
            v[free] = field.one();
            for (row, &p) in rref.iter().zip(&pivots) {
                if !field.is_zero(&row[free]) {
                    v[p] = field.neg(&row[free]);
                }
            }
            v
        })
        .collect()
}

/// Indices of the ambient vectors that extend `sub` to a basis of the span of
/// `ambient`, chosen first-fit in the given order.
pub fn complement_indices<F: Field>(
    field: &F,
    width: usize,
    ambient: &[Vec<F::Elem>],
    sub: &[Vec<F::Elem>],
) -> Result<Vec<usize>> {
    let mut ambient_span = RowBasis::new(field.clone(), width);
    for v in ambient {
        ambient_span.insert(v.clone());
    }
    if let Some(index) = sub.iter().position(|v| !ambient_span.contains(v)) {
        return Err(Error::NotContained { index });
    }
    let mut basis = RowBasis::new(field.clone(), width);
    for v in sub {
        basis.insert(v.clone());
    }
    Ok(ambient
        .iter()
        .enumerate()
        .filter_map(|(k, v)| basis.insert(v.clone()).then_some(k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};

    fn q(rows: &[&[i64]]) -> Vec<Vec<num_rational::BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rationals.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn rref_is_reduced() {
        let rows = q(&[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2]]);
        let mut b = RowBasis::new(Rationals, 4);
        for r in &rows {
            b.insert(r.clone());
        }
        assert_eq!(b.rank(), 2);
        let (rref, piv) = b.into_rref();
        assert_eq!(piv, vec![0, 1]);
        for (k, row) in rref.iter().enumerate() {
            for (j, &p) in piv.iter().enumerate() {
                let expect = if j == k { Rationals.one() } else { Rationals.zero() };
                assert_eq!(row[p], expect);
            }
        }
    }

    #[test]
    fn residual_is_canonical() {
        let f = PrimeField::new(101);
        let mut b = RowBasis::new(f, 3);
        b.insert(vec![1, 2, 3]);
        let u = b.reduced(&[5, 7, 11]);
        let w = b.reduced(&[5 + 3, 7 + 6, 11 + 9]);
        assert_eq!(u, w);
    }

    #[test]
    fn complement_rejects_outside_vectors() {
        let f = PrimeField::new(101);
        let err = complement_indices(&f, 3, &[vec![1, 0, 0]], &[vec![0, 1, 0]]).unwrap_err();
        assert_eq!(err, Error::NotContained { index: 0 });
    }
}
