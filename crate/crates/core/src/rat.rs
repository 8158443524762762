//! Exact rationals and their `"num/den"` text form.
//!
//! Every break value in the crate is a [`Rat`]. Rationals never pass through
//! floating point; on the wire they are strings such as `"11/4"` or `"5"`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a rational (expected \"num\" or \"num/den\")")]
pub struct ParseRatError {
    pub input: String,
}

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn from_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p^k` as a rational.
pub fn pow(p: u64, k: u32) -> Rat {
    Rat::from_integer(BigInt::from(p).pow(k))
}

pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError {
        input: s.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(num, den))
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The integer value of `r`, if it is an integer that fits in a `u64`.
pub fn to_u64(r: &Rat) -> Option<u64> {
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    u64::try_from(r.numer()).ok()
}

/// Serialization wrapper that writes a [`Rat`] as its `"num/den"` string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rat);

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(&self.0))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(&self.0))
    }
}

impl From<Rat> for Exact {
    fn from(r: Rat) -> Self {
        Exact(r)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => parse_rat(&s).map(Exact).map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Exact(int(n))),
        }
    }
}

/// Smallest prime factor test, enough for the small primes used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
