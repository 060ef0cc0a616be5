//! Exact scalars and dense linear algebra.
//!
//! Two coefficient fields are supported: the rationals (arbitrary precision)
//! and prime fields `GF(p)` with `2 < p < 2^32`. All heavy routines are generic
//! over the [`Field`] trait; [`Scalar`] and [`DenseMatrix`] are the dynamic,
//! field-tagged values used at API boundaries.

mod echelon;
mod field;
mod matrix;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use echelon::{complement_indices, kernel_rows, rank_of_rows, RowBasis};
pub use field::{Field, PrimeField, Rationals};
pub use matrix::{complement_basis, DenseMatrix};

/// Default prime modulus: the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime { p: DEFAULT_PRIME }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "QQ"),
            FieldSpec::Prime { p } => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `rational`, `prime` (default modulus) or `prime:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = match s {
            "rational" | "qq" | "QQ" => FieldSpec::Rational,
            "prime" => FieldSpec::default(),
            _ => match s.strip_prefix("prime:") {
                Some(p) => FieldSpec::Prime {
                    p: p.trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad prime modulus '{p}'")))?,
                },
                None => return Err(Error::InvalidInput(format!("unknown field '{s}'"))),
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl FieldSpec {
    /// Checks that a prime modulus is an odd prime small enough for `u64` products.
    pub fn validate(&self) -> Result<()> {
        if let FieldSpec::Prime { p } = *self {
            if p <= 2 || p >= 1 << 32 || !is_prime(p) {
                return Err(Error::InvalidInput(format!(
                    "field modulus {p} must be an odd prime below 2^32"
                )));
            }
        }
        Ok(())
    }

    /// Characteristic-dependent bound check: in `GF(p)` plain partial derivatives
    /// of degree-`t` forms behave like characteristic zero only when `p > t`.
    pub fn require_exceeds(&self, t: u64) -> Result<()> {
        match *self {
            FieldSpec::Prime { p } if p <= t => Err(Error::FieldTooSmall { p, required: t }),
            _ => Ok(()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::Prime { p } => Scalar::Prime {
                value: reduce_bigint(v, p),
                modulus: p,
            },
        }
    }

    /// Maps an exact rational into this field.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            FieldSpec::Rational => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Prime { p } => {
                let num = reduce_bigint(q.numer(), p);
                let den = reduce_bigint(q.denom(), p);
                if den == 0 {
                    return Err(Error::InvalidInput(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                Ok(Scalar::Prime {
                    value: num * pow_mod(den, p - 2, p) % p,
                    modulus: p,
                })
            }
        }
    }

    /// Parses an exact decimal integer or an `a/b` fraction.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        self.from_rational(&parse_rational(text)?)
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("'{text}' is not an integer or a/b fraction"));
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element tagged with its field.
///
/// Arithmetic between scalars of different fields is a programming error and
/// panics; matrix constructors validate fields up front and return
/// [`Error::FieldMismatch`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { modulus, .. } => FieldSpec::Prime { p: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn binary(&self, rhs: &Scalar, q: impl Fn(&BigRational, &BigRational) -> BigRational, m: impl Fn(u64, u64, u64) -> u64) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(q(a, b)),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: p2 }) if p == p2 => {
                Scalar::Prime { value: m(*a, *b, *p), modulus: *p }
            }
            _ => panic!("scalar field mismatch: {} vs {}", self.field(), rhs.field()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b, p| (a + b) % p)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b, p| (a + p - b) % p)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, |a, b, p| a * b % p)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}
