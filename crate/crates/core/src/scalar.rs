//! Numeric backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends are
//! provided: `f64` for large sweeps and [`Rational`] (arbitrary precision) for
//! certification runs where inequalities must hold without rounding slack.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Rational = BigRational;

/// Relative tolerance for inequality and equality checks in floating mode.
pub const REL_TOL: f64 = 1e-9;
/// Absolute tolerance for equality checks near zero in floating mode.
pub const ABS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Exact,
    #[default]
    Float,
}

impl FromStr for NumericMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(NumericMode::Exact),
            "float" => Ok(NumericMode::Float),
            other => Err(Error::ParseNumber(other.to_owned())),
        }
    }
}

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    const MODE: NumericMode;

    /// Converts a double. Exact for [`Rational`] (the binary value is kept).
    fn from_float(x: f64) -> Self;

    fn from_ratio(num: i64, den: u64) -> Self;

    fn to_float(&self) -> f64;

    fn is_finite(&self) -> bool;

    /// Parses `"n/d"`, integers and decimal literals such as `"0.25"` or `"1e-3"`.
    fn parse(s: &str) -> Result<Self>;

    /// Canonical text form: `"n/d"` for rationals, shortest round-trip form for floats.
    fn render(&self) -> String;

    /// `a >= b`, up to rounding slack in floating mode.
    ///
    /// Floating mode accepts `a - b >= -REL_TOL * max(1, |a|, |b|)`.
    fn at_least(a: &Self, b: &Self) -> bool;

    /// Equality, exact for rationals and within `max(ABS_TOL, REL_TOL * scale)` for floats.
    fn approx_eq(a: &Self, b: &Self) -> bool;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn from_float(x: f64) -> Self {
        x
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_float(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::ParseNumber(s.to_owned()))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::ParseNumber(s.to_owned()))?;
            if d == 0.0 {
                return Err(Error::ParseNumber(s.to_owned()));
            }
            return Ok(n / d);
        }
        t.parse().map_err(|_| Error::ParseNumber(s.to_owned()))
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    fn at_least(a: &Self, b: &Self) -> bool {
        let scale = 1f64.max(a.abs()).max(b.abs());
        a - b >= -REL_TOL * scale
    }

    fn approx_eq(a: &Self, b: &Self) -> bool {
        let scale = a.abs().max(b.abs());
        (a - b).abs() <= ABS_TOL.max(REL_TOL * scale)
    }
}

impl Scalar for Rational {
    const MODE: NumericMode = NumericMode::Exact;

    fn from_float(x: f64) -> Self {
        Rational::from_float(x).expect("finite value")
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_float(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s.trim()).ok_or_else(|| Error::ParseNumber(s.to_owned()))
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn at_least(a: &Self, b: &Self) -> bool {
        a >= b
    }

    fn approx_eq(a: &Self, b: &Self) -> bool {
        a == b
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n.trim())?;
        let d = parse_rational(d.trim())?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str_radix(&all_digits, 10).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_u32(10)?;
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    if negative {
        value = -value;
    }
    Some(value)
}

/// `1 - x`.
pub fn complement<T: Scalar>(x: &T) -> T {
    T::one() - x.clone()
}

/// Scale used by relative-tolerance comparisons of a sum of terms.
pub fn magnitude<T: Scalar>(values: &[T]) -> T {
    values
        .iter()
        .map(Scalar::abs_val)
        .fold(T::one(), |acc, v| if v > acc { v } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(Rational::parse("3/4").unwrap(), q(3, 4));
        assert_eq!(Rational::parse("0.3").unwrap(), q(3, 10));
        assert_eq!(Rational::parse("-1.25e-1").unwrap(), q(-1, 8));
        assert_eq!(Rational::parse("12").unwrap(), q(12, 1));
        assert_eq!(Rational::parse(".5").unwrap(), q(1, 2));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("abc").is_err());
        assert!(Rational::parse("").is_err());
    }

    #[test]
    fn parses_float_forms() {
        assert_eq!(f64::parse("1/4").unwrap(), 0.25);
        assert_eq!(f64::parse(" 0.7 ").unwrap(), 0.7);
        assert!(f64::parse("x").is_err());
    }

    #[test]
    fn rational_render_always_has_denominator() {
        assert_eq!(q(2, 1).render(), "2/1");
        assert_eq!(q(-6, 8).render(), "-3/4");
        assert_eq!(Rational::parse(&q(5, 7).render()).unwrap(), q(5, 7));
    }

    #[test]
    fn float_tolerance() {
        assert!(f64::at_least(&(1.0 - 1e-12), &1.0));
        assert!(!f64::at_least(&(1.0 - 1e-6), &1.0));
        assert!(f64::approx_eq(&1e-13, &0.0));
        assert!(!f64::approx_eq(&1e-6, &0.0));
        assert!(!Rational::at_least(&q(999_999_999_999, 1_000_000_000_000), &q(1, 1)));
    }

    #[test]
    fn from_f64_is_exact_for_rationals() {
        assert_eq!(<Rational as Scalar>::from_float(0.375), q(3, 8));
        assert_eq!(q(3, 8).to_float(), 0.375);
    }
}
