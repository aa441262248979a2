//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Element of the base field, an exact rational in lowest terms.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Decimal string pair used by every JSON encoding.
pub fn to_strings(c: &Scalar) -> (String, String) {
    (c.numer().to_string(), c.denom().to_string())
}

pub fn from_strings(num: &str, den: &str) -> Result<Scalar> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Json(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Json(format!("bad integer {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Json("zero denominator".into()));
    }
    Ok(Scalar::new(n, d))
}

/// Compact human form: `3`, `-1/2`.
pub fn fmt_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn is_negative(c: &Scalar) -> bool {
    c.is_negative()
}

/// Parses `"3"`, `"-7/4"` into a scalar.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    match s.split_once('/') {
        Some((n, d)) => from_strings(n, d),
        None => from_strings(s, "1"),
    }
}
