//! Exact rational scalars and points of `P^1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Ground-field element: an arbitrary-precision rational in lowest terms.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// `base^exp` for any integer exponent; `base` must be nonzero when `exp < 0`.
pub fn qpow(base: &Scalar, exp: i64) -> Scalar {
    let mut acc = Scalar::one();
    let mut sq = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Formats as `"p"` or `"p/q"`.
pub fn format_scalar(q: &Scalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Scalar::new(n, d))
        }
        None => Ok(Scalar::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Coordinate of a point on the normalization `P^1` of a component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Finite(Scalar),
    Infinity,
}

impl Param {
    pub fn int(n: i64) -> Self {
        Param::Finite(int(n))
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Param::Finite(q) => Some(q),
            Param::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Param::Infinity)
    }

    /// Image under `t -> (a t + b) / (c t + d)`; `ad - bc` must be nonzero.
    pub fn mobius(&self, m: &[Scalar; 4]) -> Param {
        let [a, b, c, d] = m;
        match self {
            Param::Infinity => {
                if c.is_zero() {
                    Param::Infinity
                } else {
                    Param::Finite(a / c)
                }
            }
            Param::Finite(t) => {
                let den = c * t + d;
                if den.is_zero() {
                    Param::Infinity
                } else {
                    Param::Finite((a * t + b) / den)
                }
            }
        }
    }
}

impl Ord for Param {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Param::Finite(a), Param::Finite(b)) => a.cmp(b),
            (Param::Finite(_), Param::Infinity) => Ordering::Less,
            (Param::Infinity, Param::Finite(_)) => Ordering::Greater,
            (Param::Infinity, Param::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Param {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(q) => f.write_str(&format_scalar(q)),
            Param::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Param::Infinity),
            other => parse_scalar(other).map(Param::Finite),
        }
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Scalar`] as a `"p/q"` string.
pub mod scalar_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Scalar>` as a list of strings.
pub mod scalar_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_scalar))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_scalar(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Reduces `q` modulo the prime `p`; `None` when the denominator vanishes mod `p`.
pub fn reduce_mod(q: &Scalar, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let mut n = q.numer() % &pb;
    if n.is_negative() {
        n += &pb;
    }
    let mut d = q.denom() % &pb;
    if d.is_negative() {
        d += &pb;
    }
    let n: u64 = n.try_into().ok()?;
    let d: u64 = d.try_into().ok()?;
    if d == 0 {
        return None;
    }
    Some(mulmod(n, invmod(d, p), p))
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat.
pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
