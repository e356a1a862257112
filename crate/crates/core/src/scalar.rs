//! Scalar substrate: exact rationals, radicals of the form `q·√d`, and
//! checked binary64 values.
//!
//! Rationals are always kept in lowest terms with a positive denominator, so
//! two equal values always print to the same string.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    /// `numer / denom`, reduced. Fails when `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        Self::from_bigints(BigInt::from(numer), BigInt::from(denom))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// Exact value of a finite binary64.
    pub fn from_f64_exact(value: f64) -> Result<Self> {
        BigRational::from_float(value)
            .map(Rational)
            .ok_or_else(|| Error::NonFinite(value.to_string()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(num_traits::Pow::pow(&self.0, exp)))
    }

    /// Exact `q`-th root when both numerator and denominator are perfect
    /// `q`-th powers. Even roots of negative values return `None`.
    pub fn exact_root(&self, q: u32) -> Option<Self> {
        if q == 0 {
            return None;
        }
        if q == 1 {
            return Some(self.clone());
        }
        if self.is_negative() && q % 2 == 0 {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.nth_root(q);
        let rd = d.nth_root(q);
        if num_traits::Pow::pow(&rn, q) == *n && num_traits::Pow::pow(&rd, q) == *d {
            Some(Rational(BigRational::new(rn, rd)))
        } else {
            None
        }
    }

    /// Exact `self^(p/q)` when the result is rational.
    pub fn exact_pow_rational(&self, exponent: &Rational) -> Option<Self> {
        let q = exponent.denom().to_u32()?;
        let p = exponent.numer().to_i32()?;
        if self.is_zero() && p <= 0 {
            return None;
        }
        self.exact_root(q)?.pow(p).ok()
    }

    /// Nearest binary64; fails when the value is outside the finite range.
    pub fn to_f64(&self) -> Result<f64> {
        match self.0.to_f64() {
            Some(v) if v.is_finite() => Ok(v),
            _ => Err(Error::FloatOverflow(abbreviate(&self.to_string()))),
        }
    }

    /// Binomial coefficient `C(m, k)` by Pascal's recurrence.
    pub fn binomial(m: usize, k: usize) -> Self {
        if k > m {
            return Rational::zero();
        }
        let mut row = vec![BigInt::one()];
        for _ in 0..m {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigInt::one());
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;
        }
        Rational::from_bigint(row.swap_remove(k))
    }
}

fn abbreviate(s: &str) -> String {
    if s.len() <= 40 {
        s.to_string()
    } else {
        format!("{}…({} chars)", &s[..20], s.len())
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            input: whole.to_string(),
            reason: "expected an integer or p/q rational literal".into(),
        });
    }
    t.parse::<BigInt>().map_err(|e| Error::Parse {
        input: whole.to_string(),
        reason: e.to_string(),
    })
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let n = parse_int(n, s)?;
                let d = parse_int(d, s)?;
                Rational::from_bigints(n, d).map_err(|_| Error::Parse {
                    input: s.to_string(),
                    reason: "zero denominator".into(),
                })
            }
            None => parse_int(s, s).map(Rational::from_bigint),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(de::Error::custom),
            Repr::Int(n) => Ok(Rational::from_integer(n)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $assign_trait<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// `coefficient · √radicand` with a nonnegative rational radicand.
///
/// Perfect-square radicands (rational squares) are folded into the
/// coefficient, so a rational value always has radicand `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalScalar {
    coefficient: Rational,
    radicand: Rational,
}

/// Outcome of multiplying two radicals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadicalProduct {
    Rational(Rational),
    Radical(RadicalScalar),
}

impl RadicalScalar {
    pub fn new(coefficient: Rational, radicand: Rational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::Domain(format!("negative radicand {radicand}")));
        }
        if coefficient.is_zero() || radicand.is_zero() {
            return Ok(Self::from_rational(Rational::zero()));
        }
        match radicand.exact_root(2) {
            Some(root) => Ok(Self::from_rational(coefficient * root)),
            None => Ok(RadicalScalar {
                coefficient,
                radicand,
            }),
        }
    }

    pub fn from_rational(value: Rational) -> Self {
        RadicalScalar {
            coefficient: value,
            radicand: Rational::one(),
        }
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.radicand.is_one().then_some(&self.coefficient)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn to_f64(&self) -> Result<f64> {
        let c = self.coefficient.to_f64()?;
        let d = self.radicand.to_f64()?;
        let v = c * d.sqrt();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::FloatOverflow(self.to_string()))
        }
    }
}

/// Product of two radicals. Equal radicands always give a rational; unequal
/// radicands give `√(d_a·d_b)`, which is rational only when that product is
/// a perfect square.
pub fn radical_mul(a: &RadicalScalar, b: &RadicalScalar) -> RadicalProduct {
    let coefficient = &a.coefficient * &b.coefficient;
    if a.radicand == b.radicand {
        return RadicalProduct::Rational(coefficient * &a.radicand);
    }
    let radicand = &a.radicand * &b.radicand;
    // both radicands are nonnegative, so the product is too
    let r = RadicalScalar::new(coefficient, radicand).expect("nonnegative radicand");
    match r.as_rational() {
        Some(q) => RadicalProduct::Rational(q.clone()),
        None => RadicalProduct::Radical(r),
    }
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*sqrt({})", self.coefficient, self.radicand)
    }
}

impl FromStr for RadicalScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.split_once("*sqrt(") {
            Some((c, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| Error::Parse {
                    input: s.to_string(),
                    reason: "missing closing parenthesis".into(),
                })?;
                RadicalScalar::new(c.parse()?, inner.parse()?)
            }
            None => Ok(RadicalScalar::from_rational(t.parse()?)),
        }
    }
}

impl Serialize for RadicalScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RadicalScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A finite binary64.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FloatScalar(f64);

impl FloatScalar {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(FloatScalar(value))
        } else {
            Err(Error::NonFinite(value.to_string()))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for FloatScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FloatScalar::new(f64::deserialize(deserializer)?).map_err(de::Error::custom)
    }
}

impl fmt::Display for FloatScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
