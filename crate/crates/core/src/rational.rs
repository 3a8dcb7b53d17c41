//! Exact rational scalars and their canonical `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The scalar type used for weights, slopes and values.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_i128(n: i128) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Returns the value as an `i128` if it is an integer that fits.
pub fn as_integer(x: &Q) -> Option<i128> {
    if x.is_integer() {
        x.to_integer().to_i128()
    } else {
        None
    }
}

/// Least common multiple of the denominators, as a positive integer.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise, never a decimal.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error(
    "malformed rational {0:?}: expected \"p\" or \"p/q\" with integer p and positive integer q"
)]
pub struct ParseRationalError(pub String);

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => parse_int(t).map(Q::from_integer).ok_or_else(err),
        Some((n, d)) => {
            let n = parse_int(n).ok_or_else(err)?;
            let d = parse_int(d).ok_or_else(err)?;
            if !d.is_positive() {
                return Err(err());
            }
            Ok(Q::new(n, d))
        }
    }
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}
