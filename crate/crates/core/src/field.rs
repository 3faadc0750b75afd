//! Exact scalars: rationals with arbitrary-precision parts and residues
//! modulo a prime.
//!
//! Every computation carries a single [`Field`] descriptor. Arithmetic
//! between scalars of different fields is a programming error and panics;
//! user-facing entry points validate inputs first and return
//! [`Error::MixedField`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// The rational numbers.
    Rational,
    /// The prime field with the given modulus.
    Prime(u64),
}

impl Field {
    /// The prime field 𝔽_p, rejecting composite or trivial moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || (2..).take_while(|d: &u64| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::Parse(format!("{p} is not a prime")));
        }
        if p >= 1 << 62 {
            return Err(Error::Parse(format!("modulus {p} too large")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    /// Image of an integer; signs are computed as integers and mapped here.
    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// `(-1)^e`.
    pub fn sign(self, e: i64) -> Scalar {
        self.from_i64(if e.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    /// Parses an exact decimal coefficient such as `"3"`, `"-2/5"`.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        match self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let n = self.from_bigint(&num);
                let d = self.from_bigint(&den);
                let inv = d
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("denominator of `{s}` vanishes mod {p}")))?;
                Ok(n * inv)
            }
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Prime {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// Number of elements, if finite.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// All elements of a finite field in the order 0, 1, …, p−1.
    pub fn elements(self) -> Result<Vec<Scalar>> {
        match self {
            Field::Rational => Err(Error::InfiniteField),
            Field::Prime(p) => Ok((0..p)
                .map(|value| Scalar::Prime { value, modulus: p })
                .collect()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Always in lowest terms with positive denominator (maintained by
    /// `num_rational`).
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Canonical decimal string, parseable by [`Field::parse`].
    pub fn to_decimal(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => value.to_string(),
        }
    }

    /// Checked addition that reports mixing instead of panicking.
    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        check_same(self, other)?;
        Ok(self + other)
    }

    /// Checked multiplication that reports mixing instead of panicking.
    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        check_same(self, other)?;
        Ok(self * other)
    }

    pub(crate) fn as_rational(&self) -> &BigRational {
        match self {
            Scalar::Rational(r) => r,
            Scalar::Prime { .. } => panic!("expected a rational scalar"),
        }
    }

    pub(crate) fn as_residue(&self) -> u64 {
        match self {
            Scalar::Prime { value, .. } => *value,
            Scalar::Rational(_) => panic!("expected a residue scalar"),
        }
    }

    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

fn check_same(a: &Scalar, b: &Scalar) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::MixedField(a.field(), b.field()));
    }
    Ok(())
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime { value: a, modulus: p },
                Scalar::Prime { value: b, modulus: q },
            ) if p == q => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime { value: a, modulus: p },
                Scalar::Prime { value: b, modulus: q },
            ) if p == q => Scalar::Prime {
                value: mul_mod(*a, *b, *p),
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(a.to_decimal(), "-3/2");
        let b = q.parse("1/2").unwrap();
        assert_eq!((a + b).to_decimal(), "-1");
    }

    #[test]
    fn prime_field_inverse_and_parse() {
        let f = Field::prime(7).unwrap();
        for x in f.elements().unwrap().into_iter().skip(1) {
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert_eq!(f.parse("1/2").unwrap().to_decimal(), "4");
        assert_eq!(f.from_i64(-1).to_decimal(), "6");
        assert!(f.parse("1/7").is_err());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn mixing_is_reported() {
        let a = Field::Rational.one();
        let b = Field::Prime(2).one();
        assert!(matches!(a.try_add(&b), Err(Error::MixedField(..))));
    }

    #[test]
    fn signs_follow_parity() {
        let f = Field::Prime(3);
        assert_eq!(f.sign(3).to_decimal(), "2");
        assert_eq!(f.sign(-2).to_decimal(), "1");
        assert!(Field::Prime(2).sign(1).is_one());
    }
}
