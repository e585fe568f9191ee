//! Scalar backends and the tolerance policy.
//!
//! Every formula in the crate is written once against [`Scalar`] and runs
//! either over exact rationals ([`Rational`]) or over `f64`. The exact
//! backend turns the finite identities into equalities; the float backend is
//! the only one allowed to touch infinite products, series and
//! transcendental functions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which arithmetic a [`Scalar`] implementation provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    ExactRational,
    Float,
}

impl ScalarKind {
    pub fn is_exact(self) -> bool {
        self == ScalarKind::ExactRational
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::ExactRational => f.write_str("exact"),
            ScalarKind::Float => f.write_str("float"),
        }
    }
}

/// Acceptance band `|x - y| <= absolute + relative * max(|x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Tolerance {
    /// Default band for finite closed-form formulas.
    pub const FINITE: Tolerance = Tolerance {
        absolute: 1e-12,
        relative: 1e-12,
    };

    pub fn new(absolute: f64, relative: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(absolute) || !ok(relative) || (absolute == 0.0 && relative == 0.0) {
            return Err(Error::InvalidDomain(format!(
                "tolerance needs nonnegative finite parts with one strictly positive (abs={absolute}, rel={relative})"
            )));
        }
        Ok(Tolerance { absolute, relative })
    }

    pub fn absolute(absolute: f64) -> Result<Self> {
        Self::new(absolute, 0.0)
    }

    pub fn accept(&self, x: f64, y: f64) -> bool {
        if x == y {
            return true;
        }
        (x - y).abs() <= self.absolute + self.relative * x.abs().max(y.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::FINITE
    }
}

pub fn approx_equal(x: f64, y: f64, tol: &Tolerance) -> bool {
    tol.accept(x, y)
}

/// Exact rational number, always held in canonical form
/// (positive denominator, coprime parts).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

pub fn rational_of(num: i64, den: i64) -> Result<Rational> {
    Rational::new(num, den)
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_bigints(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Re-runs reduction; a no-op on any value this type can hold.
    pub fn normalized(&self) -> Self {
        Rational(BigRational::new(self.numer().clone(), self.denom().clone()))
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        // Ratio::to_f64 rounds correctly even when both parts overflow f64.
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a finite double (every finite `f64` is a dyadic rational).
    pub fn from_f64_exact(v: f64) -> Result<Self> {
        BigRational::from_float(v)
            .map(Rational)
            .ok_or_else(|| Error::Parse(format!("{v} is not a finite number")))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Accepts `p/q`, integers and decimal literals (`0.125`, `-1.5e-3`).
/// Decimals are converted exactly, never through `f64`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return Rational::from_bigints(p, q);
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let all_digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = all_digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Rational(value))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational($tr::$m(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Arithmetic contract shared by the exact and floating-point backends.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact for rationals (every finite double is dyadic); `v` must be finite.
    fn from_f64(v: f64) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    /// Parses `p/q` or a decimal literal.
    fn parse_scalar(s: &str) -> Result<Self>;
    fn exp(&self) -> Result<Self>;
    fn sin(&self) -> Result<Self>;
    /// Exact equality for rationals, `tol` for floats.
    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool;

    fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::ExactRational;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(n)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den).expect("from_ratio with zero denominator")
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn from_f64(v: f64) -> Self {
        Rational::from_f64_exact(v).expect("from_f64 on a non-finite value")
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        s.parse()
    }
    fn exp(&self) -> Result<Self> {
        Err(Error::ExactModeUnsupported("exp"))
    }
    fn sin(&self) -> Result<Self> {
        Err(Error::ExactModeUnsupported("sin"))
    }
    fn approx_eq(&self, other: &Self, _tol: &Tolerance) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio with zero denominator");
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            // Correctly rounded quotient, not a double division.
            return Ok(s.parse::<Rational>()?.to_f64());
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("not a finite number: {s:?}")));
        }
        Ok(v)
    }
    fn exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }
    fn sin(&self) -> Result<Self> {
        Ok(f64::sin(*self))
    }
    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        tol.accept(*self, *other)
    }
    fn powi(&self, e: u32) -> Self {
        f64::powi(*self, e as i32)
    }
}

/// Ordinary binomial coefficient `C(m, s)` for `s <= m`.
pub fn binomial(m: usize, s: usize) -> i64 {
    let s = s.min(m - s);
    (0..s).fold(1i64, |acc, i| acc * (m - i) as i64 / (i + 1) as i64)
}
