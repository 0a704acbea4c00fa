use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number; the ground field for every real-structure computation.
pub type Q = BigRational;

/// A commutative field with exact arithmetic.
///
/// Arithmetic goes through the owned `std::ops` traits; the reference helpers
/// avoid spelling out clones at call sites.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_q(q: &Q) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&q_int(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|o| self.mul_ref(&o))
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"p/q"` (or `"p"` when integral).
pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.25"`.
pub fn q_parse(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

pub fn q_abs(q: &Q) -> Q {
    q.abs()
}

pub mod serde_q {
    //! Serde adapter writing rationals as strings.
    use super::{q_parse, q_to_string, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        q_parse(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod serde_q_vec {
    //! Serde adapter writing vectors of rationals as strings.
    use super::{q_parse, q_to_string, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(q_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|r| q_parse(r).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["3", "-7/4", "0", "22/7"] {
            assert_eq!(q_to_string(&q_parse(s).unwrap()), s);
        }
        assert_eq!(q_parse("6/4").unwrap(), q_frac(3, 2));
        assert_eq!(q_parse("-0.25").unwrap(), q_frac(-1, 4));
        assert!(q_parse("1/0").is_err());
        assert!(q_parse("x").is_err());
    }

    #[test]
    fn reduced_representation() {
        let q = q_frac(10, -4);
        assert_eq!(q.numer(), &BigInt::from(-5));
        assert_eq!(q.denom(), &BigInt::from(2));
    }

    #[test]
    fn field_inverse() {
        assert_eq!(Field::inv(&q_frac(2, 3)), Some(q_frac(3, 2)));
        assert_eq!(Field::inv(&q_int(0)), None);
    }
}
