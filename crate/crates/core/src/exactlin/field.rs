use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{pow_mod, FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Arithmetic of an exact field with a concrete element type.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem>;

    /// `y[k] -= a * x[k]` for `k >= start`.
    fn sub_scaled(&self, y: &mut [Self::Elem], a: &Self::Elem, x: &[Self::Elem], start: usize) {
        for (yk, xk) in y[start..].iter_mut().zip(&x[start..]) {
            if !self.is_zero(xk) {
                *yk = self.sub(yk, &self.mul(a, xk));
            }
        }
    }

    fn scale(&self, y: &mut [Self::Elem], a: &Self::Elem) {
        for yk in y.iter_mut() {
            *yk = self.mul(yk, a);
        }
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn from_scalar(&self, s: &Scalar) -> Result<BigRational> {
        match s {
            Scalar::Rational(q) => Ok(q.clone()),
            other => Err(Error::FieldMismatch {
                expected: FieldSpec::Rational,
                found: other.field(),
            }),
        }
    }
}

/// `GF(p)` for an odd prime `p < 2^32`, elements kept in `[0, p)`.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(p > 2 && p < 1 << 32);
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        pow_mod(*a, self.p - 2, self.p)
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Prime {
            value: *a,
            modulus: self.p,
        }
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64> {
        match s {
            Scalar::Prime { value, modulus } if *modulus == self.p => Ok(*value),
            other => Err(Error::FieldMismatch {
                expected: self.spec(),
                found: other.field(),
            }),
        }
    }

    fn sub_scaled(&self, y: &mut [u64], a: &u64, x: &[u64], start: usize) {
        let p = self.p;
        let na = (p - a) % p;
        for (yk, xk) in y[start..].iter_mut().zip(&x[start..]) {
            if *xk != 0 {
                *yk = (*yk + na * xk) % p;
            }
        }
    }
}

/// Runs `$body` with `$f` bound to the concrete field selected by a [`FieldSpec`].
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            $crate::exactlin::FieldSpec::Rational => {
                let $f = $crate::exactlin::Rationals;
                $body
            }
            $crate::exactlin::FieldSpec::Prime { p } => {
                let $f = $crate::exactlin::PrimeField::new(p);
                $body
            }
        }
    };
}
