//! Exact rational numbers and the small scalar abstraction shared by the
//! exact and floating-point code paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{GeoError, Result};

pub type Rational = BigRational;

/// Shorthand for `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact binary value of a finite float.
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_f64(v).ok_or_else(|| GeoError::Domain(format!("non-finite value {v}")))
}

pub fn to_f64(v: &Rational) -> f64 {
    ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
}

/// `num/den` in lowest terms; integers print without a denominator.
pub fn format(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Accepts `a/b`, integers and plain decimals (`0.25` is read exactly).
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| GeoError::Parse(format!("bad rational '{s}'")))?;
        let d: BigInt = d.trim().parse().map_err(|_| GeoError::Parse(format!("bad rational '{s}'")))?;
        if d.is_zero() {
            return Err(GeoError::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().map_err(|_| GeoError::Parse(format!("bad number '{s}'")))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let f: f64 = s.parse().map_err(|_| GeoError::Parse(format!("bad number '{s}'")))?;
    from_f64(f)
}

/// Square root when `v` is the square of a rational.
pub fn exact_sqrt(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer();
    let d = v.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

pub fn sqrt_f64(v: &Rational) -> f64 {
    to_f64(v).max(0.0).sqrt()
}

/// Power of an integer base as a rational.
pub fn pow_int(base: i64, exp: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(base), exp as usize))
}

/// Field operations needed by the LP solver and by polynomial integration,
/// implemented for exact rationals and for `f64`.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(v: &Rational) -> Self;
    /// Selects the representation matching `Self` from a value stored both
    /// exactly and approximately.
    fn pick(exact: &Rational, approx: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero_tol(&self) -> bool;
    fn is_exact_zero(&self) -> bool;
    fn is_negative_tol(&self) -> bool;
    fn is_positive_tol(&self) -> bool {
        !self.is_zero_tol() && !self.is_negative_tol()
    }
    fn abs_val(&self) -> Self {
        if self.is_negative_tol() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn floor_val(&self) -> Self;
    fn is_integral(&self) -> bool;
    /// Exact conversion when `Self` is the rational type.
    fn as_rational(&self) -> Option<Rational>;
}

/// Absolute tolerance used by the floating-point code paths.
pub const F64_TOL: f64 = 1e-9;

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        int(v)
    }
    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }
    fn pick(exact: &Rational, _approx: f64) -> Self {
        exact.clone()
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    fn is_zero_tol(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative_tol(&self) -> bool {
        self.numer().sign() == Sign::Minus
    }
    fn floor_val(&self) -> Self {
        self.floor()
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(v: &Rational) -> Self {
        to_f64(v)
    }
    fn pick(_exact: &Rational, approx: f64) -> Self {
        approx
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero_tol(&self) -> bool {
        self.abs() <= F64_TOL
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negative_tol(&self) -> bool {
        *self < -F64_TOL
    }
    fn floor_val(&self) -> Self {
        (self + F64_TOL).floor()
    }
    fn is_integral(&self) -> bool {
        (self - self.round()).abs() <= 1e-7
    }
    fn as_rational(&self) -> Option<Rational> {
        None
    }
}

/// A non-negative quantity that is known exactly when every contribution is
/// a rational multiple of a rational square root that happens to be exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    pub exact: Option<Rational>,
    pub approx: f64,
}

impl Measure {
    pub fn zero() -> Self {
        Measure { exact: Some(Zero::zero()), approx: 0.0 }
    }

    pub fn exact(v: Rational) -> Self {
        let approx = to_f64(&v);
        Measure { exact: Some(v), approx }
    }

    /// `coeff * sqrt(radicand)`.
    pub fn scaled_sqrt(coeff: &Rational, radicand: &Rational) -> Self {
        match exact_sqrt(radicand) {
            Some(r) => Measure::exact(coeff * r),
            None => Measure { exact: None, approx: to_f64(coeff) * sqrt_f64(radicand) },
        }
    }

    pub fn approx(v: f64) -> Self {
        Measure { exact: None, approx: v }
    }

    pub fn add(&mut self, other: &Measure) {
        self.approx += other.approx;
        self.exact = match (self.exact.take(), &other.exact) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }

    pub fn value(&self) -> f64 {
        self.approx
    }

    pub fn scaled(&self, c: &Rational) -> Measure {
        Measure { exact: self.exact.as_ref().map(|v| v * c), approx: self.approx * to_f64(c) }
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Measure>) -> Measure {
        let mut acc = Measure::zero();
        for m in items {
            acc.add(m);
        }
        acc
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.exact {
            Some(v) => write!(f, "{}", format(v)),
            None => write!(f, "{:.12e}", self.approx),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/12").unwrap(), rat(1, 4));
        assert_eq!(parse("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert_eq!(format(&rat(6, 4)), "3/2");
        assert_eq!(format(&int(-2)), "-2");
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&rat(9, 16)), Some(rat(3, 4)));
        assert_eq!(exact_sqrt(&rat(2, 1)), None);
        assert_eq!(exact_sqrt(&rat(-1, 4)), None);
    }

    #[test]
    fn measure_sums_stay_exact_until_irrational() {
        let mut m = Measure::zero();
        m.add(&Measure::scaled_sqrt(&rat(1, 2), &rat(4, 1)));
        assert_eq!(m.exact, Some(int(1)));
        m.add(&Measure::scaled_sqrt(&int(1), &int(2)));
        assert!(m.exact.is_none());
        assert!((m.approx - (1.0 + 2f64.sqrt())).abs() < 1e-14);
    }
}
