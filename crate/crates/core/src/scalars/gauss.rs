use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{q_parse, q_to_string, Field, Q};

/// Gaussian rational `re + i·im`, an element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gauss {
    pub re: Q,
    pub im: Q,
}

impl Gauss {
    pub fn new(re: Q, im: Q) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: Q) -> Self {
        Gauss { re, im: Q::zero() }
    }

    pub fn i() -> Self {
        Gauss { re: Q::zero(), im: Q::one() }
    }

    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        Field::is_zero(&self.im)
    }

    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for Gauss {
    type Output = Gauss;
    fn add(self, o: Gauss) -> Gauss {
        Gauss { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Gauss {
    type Output = Gauss;
    fn sub(self, o: Gauss) -> Gauss {
        Gauss { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Gauss {
    type Output = Gauss;
    fn mul(self, o: Gauss) -> Gauss {
        self.mul_ref(&o)
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss { re: -self.re, im: -self.im }
    }
}

impl Field for Gauss {
    fn zero() -> Self {
        Gauss::real(Q::zero())
    }
    fn one() -> Self {
        Gauss::real(Q::one())
    }
    fn is_zero(&self) -> bool {
        Field::is_zero(&self.re) && Field::is_zero(&self.im)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        let ninv = Field::inv(&n)?;
        Some(Gauss { re: &self.re * &ninv, im: -(&self.im * &ninv) })
    }
    fn from_q(q: &Q) -> Self {
        Gauss::real(q.clone())
    }
    fn add_ref(&self, o: &Self) -> Self {
        Gauss { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Gauss { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", q_to_string(&self.re), q_to_string(&self.im))
    }
}

impl Serialize for Gauss {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [q_to_string(&self.re), q_to_string(&self.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gauss {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Pair([String; 2]),
            Real(String),
        }
        let (re, im) = match Raw::deserialize(d)? {
            Raw::Pair([re, im]) => (re, im),
            Raw::Real(re) => (re, "0".to_string()),
        };
        let re = q_parse(&re).map_err(serde::de::Error::custom)?;
        let im = q_parse(&im).map_err(serde::de::Error::custom)?;
        Ok(Gauss { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::q_frac;

    #[test]
    fn conjugation_is_an_involutive_ring_map() {
        let a = Gauss::new(q_frac(1, 2), q_frac(-3, 5));
        let b = Gauss::new(q_frac(7, 1), q_frac(2, 3));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul_ref(&b).conj(), a.conj().mul_ref(&b.conj()));
        assert_eq!(a.add_ref(&b).conj(), a.conj().add_ref(&b.conj()));
    }

    #[test]
    fn inverse() {
        let a = Gauss::new(q_frac(1, 2), q_frac(-3, 5));
        assert_eq!(a.mul_ref(&a.inv().unwrap()), Gauss::one());
        assert_eq!(Gauss::i().mul_ref(&Gauss::i()), -Gauss::one());
    }

    #[test]
    fn serde_pair() {
        let a = Gauss::new(q_frac(1, 2), q_frac(-3, 1));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"["1/2","-3"]"#);
        let back: Gauss = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
