//! Exact rational scalars and the `L^p` exponent.
//!
//! Every structural quantity in the crate (measures, weights, constants) is a
//! [`Rational`]. On the wire rationals are strings: `"3"` or `"num/den"` in
//! lowest terms, so parsing and printing round-trip the value exactly.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{One, Pow, Signed, ToPrimitive, Zero};
use num::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"a"` or `"a/b"` (optionally signed) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    // BigRational's Display already prints reduced `n` or `n/d`.
    q.to_string()
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `q^e` for any signed integer exponent (`q` must be nonzero when `e < 0`).
pub fn powi(q: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let magnitude = e.unsigned_abs();
    let base = if e < 0 { q.recip() } else { q.clone() };
    match u32::try_from(magnitude) {
        Ok(m) => Pow::pow(&base, m),
        Err(_) => {
            let mut acc = Rational::one();
            for _ in 0..magnitude {
                acc *= &base;
            }
            acc
        }
    }
}

/// Best-effort conversion to `f64`. Huge numerators and denominators are
/// scaled by their bit lengths so that tiny measures do not collapse to NaN.
pub fn to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    let numer = q.numer();
    let denom = q.denom();
    let shift_n = numer.bits().saturating_sub(60);
    let shift_d = denom.bits().saturating_sub(60);
    let n = (numer >> shift_n).to_f64().unwrap_or(0.0);
    let d = (denom >> shift_d).to_f64().unwrap_or(1.0);
    let exp = shift_n as i64 - shift_d as i64;
    (n / d) * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

/// Exponent `p` of the `L^p` / `ℓ^p` scale, a rational with `p ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    num: u32,
    den: u32,
}

impl Exponent {
    pub fn new(value: &Rational) -> Result<Self> {
        if value < &Rational::one() {
            return Err(Error::InvalidExponent(format_rational(value)));
        }
        let num = value
            .numer()
            .to_u32()
            .ok_or_else(|| Error::InvalidExponent(format_rational(value)))?;
        let den = value
            .denom()
            .to_u32()
            .ok_or_else(|| Error::InvalidExponent(format_rational(value)))?;
        Ok(Exponent { num, den })
    }

    pub fn integer(p: u32) -> Self {
        assert!(p >= 1, "exponent must be at least 1");
        Exponent { num: p, den: 1 }
    }

    pub fn one() -> Self {
        Exponent::integer(1)
    }

    pub fn value(&self) -> Rational {
        rat(self.num as i64, self.den as i64)
    }

    pub fn numer(&self) -> u32 {
        self.num
    }

    pub fn denom(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `Some(p)` when the exponent is an integer, so `|a|^p` stays rational.
    pub fn as_integer(&self) -> Option<u32> {
        (self.den == 1).then_some(self.num)
    }

    /// `|a|^p` exactly, when `p` is an integer.
    pub fn abs_pow(&self, a: &Rational) -> Option<Rational> {
        self.as_integer().map(|p| Pow::pow(&a.abs(), p))
    }

    /// `q^(1/p)` as a float, `q ≥ 0`.
    pub fn root_f64(&self, q: &Rational) -> f64 {
        let v = to_f64(q);
        if self.num == 1 && self.den == 1 {
            v
        } else {
            v.powf(1.0 / self.as_f64())
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Exponent::new(&parse_rational(s)?)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a single rational stored as a string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
