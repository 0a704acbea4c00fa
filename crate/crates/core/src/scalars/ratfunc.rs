use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Q};
use super::poly::Poly;

/// Rational function in one variable over ℚ, kept as a reduced fraction with
/// monic denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: Poly<Q>,
    den: Poly<Q>,
}

impl RatFunc {
    pub fn new(num: Poly<Q>, den: Poly<Q>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, _) = num.div_rem(&g).expect("gcd nonzero");
        let (mut d, _) = den.div_rem(&g).expect("gcd nonzero");
        let lead = d.leading().cloned().expect("nonzero denominator");
        let li = Field::inv(&lead).expect("nonzero leading coefficient");
        n = n.scale(&li);
        d = d.scale(&li);
        RatFunc { num: n, den: d }
    }

    pub fn poly(p: Poly<Q>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn t() -> Self {
        RatFunc::poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<Q> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Q> {
        &self.den
    }

    /// Evaluation at a rational point; `None` at a pole.
    pub fn eval(&self, t: &Q) -> Option<Q> {
        let d = self.den.eval(t);
        Field::inv(&d).map(|di| self.num.eval(t) * di)
    }
}

impl Add for RatFunc {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num + o.num, self.den);
        }
        RatFunc::new(
            self.num * o.den.clone() + o.num * self.den.clone(),
            self.den * o.den,
        )
    }
}

impl Sub for RatFunc {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        RatFunc::new(self.num * o.num, self.den * o.den)
    }
}

impl Neg for RatFunc {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::poly(Poly::zero())
    }
    fn one() -> Self {
        RatFunc::poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_q(q: &Q) -> Self {
        RatFunc::poly(Poly::constant(q.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::q_int;

    #[test]
    fn field_laws() {
        let t = RatFunc::t();
        let one = RatFunc::one();
        let a = (t.clone() + one.clone()).inv().unwrap();
        let b = (t.clone() - one.clone()).inv().unwrap();
        // 1/(t+1) + 1/(t-1) = 2t/(t^2-1)
        let lhs = a + b;
        let rhs = (t.clone() * RatFunc::from_i64(2))
            * (t.clone() * t.clone() - one).inv().unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.eval(&q_int(3)), Some(crate::scalars::field::q_frac(3, 4)));
    }
}
