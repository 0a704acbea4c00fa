use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::field::{Field, Q};
use super::gauss::Gauss;

/// Univariate polynomial with coefficients listed from the constant term up.
/// Trailing zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: Deserialize<'de>"))]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(F::one(), 1)
    }

    /// `x - c`.
    pub fn linear_root(c: F) -> Self {
        Poly::new(vec![-c, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn eval(&self, t: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul_ref(t).add_ref(c))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_ref(&F::from_i64(k as i64)))
                .collect(),
        )
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lead_inv = d.leading()?.inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem[rem.len() - 1].mul_ref(&lead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub_ref(&c.mul_ref(dc));
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Some((Poly::new(quot), Poly::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(|l| l.inv()) {
            Some(li) => self.scale(&li),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).expect("nonzero divisor").1;
            x = y;
            y = r;
        }
        x.monic()
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Poly::one(), |acc, _| acc * self.clone())
    }

    /// Coefficients of the expansion in powers of `(x - c)`.
    pub fn taylor_at(&self, c: &F) -> Vec<F> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut cur = self.clone();
        let lin = Poly::linear_root(c.clone());
        while !cur.is_zero() {
            let (q, r) = cur.div_rem(&lin).expect("nonzero divisor");
            out.push(r.coeff(0));
            cur = q;
        }
        out
    }

    /// Order of vanishing at `c`; `None` for the zero polynomial.
    pub fn valuation_at(&self, c: &F) -> Option<usize> {
        self.taylor_at(c).iter().position(|a| !a.is_zero())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Q> {
    pub fn complexify(&self) -> Poly<Gauss> {
        self.map(|c| Gauss::real(c.clone()))
    }
}

impl Poly<Gauss> {
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// Real and imaginary parts as rational polynomials.
    pub fn split_real(&self) -> (Poly<Q>, Poly<Q>) {
        (self.map(|c| c.re.clone()), self.map(|c| c.im.clone()))
    }

    /// Exponent of the largest power of `(x - i)` dividing the polynomial, i.e. the
    /// largest `p` with the element in `F^p = (x - i)^p ℚ(i)[x]`.
    pub fn hodge_level(&self) -> Option<usize> {
        self.valuation_at(&Gauss::i())
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).add_ref(&o.coeff(k))).collect())
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).sub_ref(&o.coeff(k))).collect())
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Poly::new(v)
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// An element of the ring 𝒮 = ℚ[x]; complexified elements are `Poly<Gauss>`.
pub type SRingElem = Poly<Q>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::{q_frac, q_int};

    fn qp(v: &[i64]) -> Poly<Q> {
        Poly::new(v.iter().map(|&a| q_int(a)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = qp(&[-1, 0, 1]);
        let b = qp(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, qp(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(Poly::gcd(&a, &qp(&[1, 2, 1])), qp(&[1, 1]));
    }

    #[test]
    fn taylor_expansion_recovers_polynomial() {
        let p = qp(&[3, -2, 0, 5]);
        let c = q_frac(2, 3);
        let t = p.taylor_at(&c);
        let lin = Poly::linear_root(c.clone());
        let back = t
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (k, a)| acc + lin.pow(k).scale(a));
        assert_eq!(back, p);
    }

    #[test]
    fn hodge_levels_multiply() {
        let xi = Poly::linear_root(Gauss::i());
        let a = xi.pow(2) * qp(&[1, 1]).complexify();
        let b = xi.clone() * qp(&[2, 0, 1]).complexify();
        assert_eq!(a.hodge_level(), Some(2));
        assert_eq!(b.hodge_level(), Some(1));
        assert_eq!((a * b).hodge_level(), Some(3));
        // x^2 + 1 = (x - i)(x + i) lies in F^1
        assert_eq!(qp(&[1, 0, 1]).complexify().hodge_level(), Some(1));
        assert_eq!(qp(&[0, 1]).complexify().hodge_level(), Some(0));
    }
}
