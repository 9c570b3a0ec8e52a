//! Exact fractions.
//!
//! All probability arithmetic in the crate runs on [`Rational`], an
//! arbitrary-precision fraction that is reduced to lowest terms after every
//! operation. Nothing on the exact path is ever rounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

pub type Rational = BigRational;

/// `num / den` as a reduced fraction. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Largest positive rational `g` such that every value divided by `g` is an
/// integer, i.e. the gcd of the numerators over the lcm of the denominators.
/// Returns `None` when all values are zero.
pub fn content<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for v in values {
        if v.is_zero() {
            continue;
        }
        num_gcd = num_gcd.gcd(v.numer());
        den_lcm = den_lcm.lcm(v.denom());
    }
    if num_gcd.is_zero() {
        None
    } else {
        Some(Rational::new(num_gcd, den_lcm))
    }
}

/// Lossy conversion for the floating path.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `INT`, `INT/POSINT` or a plain decimal such as `0.125` or `-1.5`.
///
/// Decimals are converted exactly through a power-of-ten denominator, so
/// `0.125` becomes `1/8`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_int(num.trim()).ok_or_else(err)?;
        let den_text = den.trim();
        if den_text.starts_with(['+', '-']) {
            return Err(err());
        }
        let den = parse_int(den_text).ok_or_else(err)?;
        if !den.is_positive() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, digits) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.is_empty() && frac.is_empty()) {
            return Err(err());
        }
        let all_digits = format!("{digits}{frac}");
        let mut num = BigInt::from_str(&all_digits).map_err(|_| err())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    parse_int(s).map(Rational::from_integer).ok_or_else(err)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}
