//! Exact rationals and symbolic edge weights.
//!
//! A [`Weight`] is the triple `(a, b, c)` standing for `a + b·ε + c·δ′` with
//! `δ′ ≪ ε ≪ 1`; comparisons are lexicographic and arithmetic is componentwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number.
///
/// Integers that fit in an `i64` are kept inline; everything else lives in a
/// boxed `BigRational`. The representation is canonical, so structural
/// equality and hashing agree with numeric equality.
#[derive(PartialEq, Eq, Hash)]
pub enum Rational {
    Int(i64),
    Big(Box<BigRational>),
}

impl Clone for Rational {
    #[inline]
    fn clone(&self) -> Self {
        match self {
            Rational::Int(v) => Rational::Int(*v),
            Rational::Big(b) => Rational::Big(b.clone()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed rational {0:?}")]
pub struct RationalParseError(pub String);

impl Rational {
    pub const ZERO: Rational = Rational::Int(0);

    pub fn from_integer(v: i64) -> Self {
        Rational::Int(v)
    }

    /// `num / den`, reduced. Panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Rational::Int(v);
            }
        }
        Rational::Big(Box::new(r))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Int(v) => BigRational::from_integer(BigInt::from(*v)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Int(0))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Rational::Int(_))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rational::Int(v) => v.signum() as i32,
            Rational::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        match self {
            Rational::Int(v) => match v.checked_mul(k) {
                Some(p) => Rational::Int(p),
                None => Self::from_big(self.to_big() * BigInt::from(k)),
            },
            Rational::Big(b) => Self::from_big(&**b * BigInt::from(k)),
        }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        match self {
            Rational::Int(v) if v % k == 0 => Rational::Int(v / k),
            _ => Self::from_big(self.to_big() / BigInt::from(k)),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::Int(v)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Int(a), Rational::Int(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Rational {
    type Output = Rational;
    #[inline]
    fn add(self, rhs: &Rational) -> Rational {
        if let (Rational::Int(a), Rational::Int(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return Rational::Int(s);
            }
        }
        Rational::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for &Rational {
    type Output = Rational;
    #[inline]
    fn sub(self, rhs: &Rational) -> Rational {
        if let (Rational::Int(a), Rational::Int(b)) = (self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                return Rational::Int(s);
            }
        }
        Rational::from_big(self.to_big() - rhs.to_big())
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Int(v) => match v.checked_neg() {
                Some(n) => Rational::Int(n),
                None => Rational::from_big(-BigRational::from_integer(BigInt::from(v))),
            },
            Rational::Big(b) => Rational::from_big(-*b),
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        &self + &rhs
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        &self - &rhs
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Int(v) => write!(f, "{v}"),
            Rational::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalParseError;

    /// Accepts `"p"` or `"p/q"` with optional sign on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RationalParseError(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_big(BigRational::new(num, den)))
    }
}

/// Symbolic length `a + b·ε + c·δ′`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Weight {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Weight { a, b, c }
    }

    pub fn zero() -> Self {
        Weight::default()
    }

    /// A plain real length `(r, 0, 0)`.
    pub fn real(r: Rational) -> Self {
        Weight { a: r, ..Weight::default() }
    }

    pub fn int(v: i64) -> Self {
        Weight::real(Rational::Int(v))
    }

    /// The infinitesimal `ε`.
    pub fn eps() -> Self {
        Weight { b: Rational::Int(1), ..Weight::default() }
    }

    /// The second-order infinitesimal `δ′`.
    pub fn delta() -> Self {
        Weight { c: Rational::Int(1), ..Weight::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        *self > Weight::zero()
    }

    /// True when only the real coordinate is nonzero.
    pub fn is_real(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Weight { a: self.a.mul_int(k), b: self.b.mul_int(k), c: self.c.mul_int(k) }
    }

    pub fn div_int(&self, k: i64) -> Self {
        Weight { a: self.a.div_int(k), b: self.b.div_int(k), c: self.c.div_int(k) }
    }
}

impl From<i64> for Weight {
    fn from(v: i64) -> Self {
        Weight::int(v)
    }
}

impl Add for &Weight {
    type Output = Weight;
    #[inline]
    fn add(self, rhs: &Weight) -> Weight {
        Weight { a: &self.a + &rhs.a, b: &self.b + &rhs.b, c: &self.c + &rhs.c }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    #[inline]
    fn sub(self, rhs: &Weight) -> Weight {
        Weight { a: &self.a - &rhs.a, b: &self.b - &rhs.b, c: &self.c - &rhs.c }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        *self = &*self - rhs;
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { a: -self.a, b: -self.b, c: -self.c }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.a);
        }
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
