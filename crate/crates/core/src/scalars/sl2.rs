use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{q_int, serde_q, Field, Q};
use super::poly::Poly;

/// Exponents `(a, b, c, d)` of the monomial `u^a v^b x^c y^d`.
///
/// Ordered degree-lexicographically: total degree first, then the exponent
/// tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mono(pub [u32; 4]);

impl Mono {
    pub const ONE: Mono = Mono([0, 0, 0, 0]);
    pub const U: Mono = Mono([1, 0, 0, 0]);
    pub const V: Mono = Mono([0, 1, 0, 0]);
    pub const X: Mono = Mono([0, 0, 1, 0]);
    pub const Y: Mono = Mono([0, 0, 0, 1]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weight under the torus action: `u, v` have weight −1 and `x, y` weight +1.
    pub fn weight(&self) -> i64 {
        let [a, b, c, d] = self.0;
        c as i64 + d as i64 - a as i64 - b as i64
    }

    pub fn is_normal(&self) -> bool {
        self.0[0] == 0 || self.0[3] == 0
    }

    fn times(&self, o: &Mono) -> Mono {
        Mono([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| o.0.cmp(&self.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Element of O(SL₂) = ℚ[u,v,x,y]/(uy − vx − 1) in normal form: no monomial
/// contains both `u` and `y`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SL2Elem {
    terms: BTreeMap<Mono, Q>,
}

impl SL2Elem {
    pub fn zero() -> Self {
        SL2Elem::default()
    }

    pub fn one() -> Self {
        SL2Elem::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        SL2Elem::term(Mono::ONE, c)
    }

    pub fn u() -> Self {
        SL2Elem::term(Mono::U, Q::one())
    }
    pub fn v() -> Self {
        SL2Elem::term(Mono::V, Q::one())
    }
    pub fn x() -> Self {
        SL2Elem::term(Mono::X, Q::one())
    }
    pub fn y() -> Self {
        SL2Elem::term(Mono::Y, Q::one())
    }

    /// `c·m`, normalized.
    pub fn term(m: Mono, c: Q) -> Self {
        let mut e = SL2Elem::zero();
        e.add_monomial(m, c);
        e
    }

    /// Normal form of an arbitrary polynomial in `u, v, x, y`, obtained by
    /// rewriting `uy → vx + 1` until no monomial contains `uy`.
    pub fn normalize<I: IntoIterator<Item = (Mono, Q)>>(terms: I) -> Self {
        let mut e = SL2Elem::zero();
        for (m, c) in terms {
            e.add_monomial(m, c);
        }
        e
    }

    fn add_raw(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Q::zero);
        *slot = slot.add_ref(&c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn add_monomial(&mut self, m: Mono, c: Q) {
        let [a, b, cx, d] = m.0;
        let k = a.min(d);
        if k == 0 {
            self.add_raw(m, c);
            return;
        }
        // u^k y^k = (vx + 1)^k
        for j in 0..=k {
            let coef = c.mul_ref(&q_int(binomial(k, j)));
            self.add_raw(Mono([a - k, b + j, cx + j, d - k]), coef);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending degree-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest total degree of a normal-form monomial; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return SL2Elem::zero();
        }
        SL2Elem { terms: self.terms.iter().map(|(m, a)| (*m, a.mul_ref(c))).collect() }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let mut e = SL2Elem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                e.add_monomial(m1.times(m2), c1.mul_ref(c2));
            }
        }
        e
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (m, c) in &o.terms {
            e.add_raw(*m, c.clone());
        }
        e
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (m, c) in &o.terms {
            e.add_raw(*m, -c.clone());
        }
        e
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(SL2Elem::one(), |acc, _| acc.mul_ref(self))
    }

    /// Decomposition into torus-weight components (`u, v` weight −1, `x, y` weight +1).
    pub fn weight_components(&self) -> BTreeMap<i64, SL2Elem> {
        let mut out: BTreeMap<i64, SL2Elem> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight()).or_default().add_raw(*m, c.clone());
        }
        out
    }

    /// `Some(w)` when every term has weight `w`; zero is homogeneous of every weight.
    pub fn homogeneous_weight(&self) -> Option<i64> {
        let mut ws = self.terms.keys().map(|m| m.weight());
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    /// The derivation `N` with `Nx = u`, `Ny = v`, `Nu = Nv = 0`.
    pub fn n_derive(&self) -> Self {
        let mut e = SL2Elem::zero();
        for (m, c) in &self.terms {
            let [a, b, cx, d] = m.0;
            if cx > 0 {
                e.add_monomial(Mono([a + 1, b, cx - 1, d]), c.mul_ref(&q_int(cx as i64)));
            }
            if d > 0 {
                e.add_monomial(Mono([a, b + 1, cx, d - 1]), c.mul_ref(&q_int(d as i64)));
            }
        }
        e
    }

    /// Value at a rational point `(u, v, x, y)`; meaningful on SL₂(ℚ).
    pub fn eval(&self, p: &[Q; 4]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (e, val) in m.0.iter().zip(p.iter()) {
                for _ in 0..*e {
                    t = t.mul_ref(val);
                }
            }
            acc.add_ref(&t)
        })
    }

    /// Restriction to the subgroup `(u, v, x, y) = (1, 0, x, 1)`, giving a
    /// polynomial in `x`.
    pub fn restrict_to_s(&self) -> Poly<Q> {
        let mut coeffs: Vec<Q> = Vec::new();
        for (m, c) in &self.terms {
            let [_, b, cx, _] = m.0;
            if b > 0 {
                continue;
            }
            let k = cx as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Q::zero());
            }
            coeffs[k] = coeffs[k].add_ref(c);
        }
        Poly::new(coeffs)
    }

    /// The semilinear involution `u* = y`, `v* = −x` (on real coefficients).
    pub fn star(&self) -> Self {
        SL2Elem::normalize(self.terms.iter().map(|(m, c)| {
            let [a, b, cx, d] = m.0;
            let sign = if (b + cx) % 2 == 0 { c.clone() } else { -c.clone() };
            (Mono([d, cx, b, a]), sign)
        }))
    }
}

impl Add for SL2Elem {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl Sub for SL2Elem {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}

impl Mul for SL2Elem {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl Neg for SL2Elem {
    type Output = Self;
    fn neg(self) -> Self {
        SL2Elem { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl fmt::Display for SL2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["u", "v", "x", "y"];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = super::field::q_to_string(c);
                if *m != Mono::ONE {
                    if c.is_one() {
                        s.clear();
                    } else if (-c.clone()).is_one() {
                        s = "-".into();
                    }
                }
                for (e, n) in m.0.iter().zip(names) {
                    match e {
                        0 => {}
                        1 => s.push_str(n),
                        _ => s.push_str(&format!("{n}^{e}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr(Mono, #[serde(with = "serde_q")] Q);

impl Serialize for SL2Elem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self.terms.iter().map(|(m, c)| TermRepr(*m, c.clone())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SL2Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        Ok(SL2Elem::normalize(v.into_iter().map(|TermRepr(m, c)| (m, c))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::q_frac;
    use proptest::prelude::*;

    fn u() -> SL2Elem {
        SL2Elem::u()
    }
    fn v() -> SL2Elem {
        SL2Elem::v()
    }
    fn x() -> SL2Elem {
        SL2Elem::x()
    }
    fn y() -> SL2Elem {
        SL2Elem::y()
    }

    #[test]
    fn defining_relation() {
        assert_eq!(u() * y(), v() * x() + SL2Elem::one());
        assert!((u() * y() - v() * x() - SL2Elem::one()).is_zero());
    }

    #[test]
    fn rewrite_uyx() {
        // u·y·x = (vx + 1)x
        let expected = v() * x() * x() + x();
        assert_eq!(u() * y() * x(), expected);
        assert_eq!(expected.coeff(&Mono([0, 1, 2, 0])), Q::one());
        assert_eq!(expected.coeff(&Mono::X), Q::one());
    }

    #[test]
    fn higher_power_rewrite() {
        // u^2 y^2 = (vx+1)^2
        let lhs = SL2Elem::term(Mono([2, 0, 0, 2]), Q::one());
        let vx1 = v() * x() + SL2Elem::one();
        assert_eq!(lhs, vx1.clone() * vx1);
    }

    #[test]
    fn weights() {
        let w = u().weight_components();
        assert_eq!(w.len(), 1);
        assert_eq!(w[&-1], u());
        assert_eq!((v() * x()).homogeneous_weight(), Some(0));
        let e = x() * x() * y() + u();
        let w = e.weight_components();
        assert_eq!(w[&3], x() * x() * y());
        assert_eq!(w[&-1], u());
    }

    #[test]
    fn derivation_n() {
        assert_eq!(x().n_derive(), u());
        assert_eq!(y().n_derive(), v());
        assert!(u().n_derive().is_zero());
        assert!((u() * y() - v() * x()).n_derive().is_zero());
        assert_eq!((x() * x()).n_derive(), (u() * x()).scale(&q_int(2)));
    }

    #[test]
    fn restriction_to_s_row() {
        let e = x() * y() + u() * x() + v();
        assert_eq!(e.restrict_to_s(), Poly::new(vec![Q::zero(), q_int(2)]));
    }

    #[test]
    fn star_is_involutive_and_multiplicative() {
        let a = u() * x() + v().scale(&q_frac(1, 2));
        let b = y() * y() - x();
        assert_eq!(a.star().star(), a);
        assert_eq!((a.clone() * b.clone()).star(), a.star() * b.star());
        assert_eq!(u().star(), y());
        assert_eq!(v().star(), -x());
    }

    #[test]
    fn serde_canonical_order() {
        let e = x() * x() + u() + SL2Elem::constant(q_frac(-1, 2));
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"[[[0,0,0,0],"-1/2"],[[1,0,0,0],"1"],[[0,0,2,0],"1"]]"#);
        let back: SL2Elem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    fn arb_elem() -> impl Strategy<Value = SL2Elem> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -4i64..5), 0..5).prop_map(
            |v| SL2Elem::normalize(v.into_iter().map(|((a, b, c, d), k)| (Mono([a, b, c, d]), q_int(k)))),
        )
    }

    proptest! {
        #[test]
        fn normal_form_has_no_uy(e in arb_elem()) {
            prop_assert!(e.terms().all(|(m, _)| m.is_normal()));
        }

        #[test]
        fn ring_laws(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
            prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
            prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        }

        #[test]
        fn n_is_a_derivation(a in arb_elem(), b in arb_elem()) {
            let lhs = a.mul_ref(&b).n_derive();
            let rhs = a.n_derive().mul_ref(&b).add_ref(&a.mul_ref(&b.n_derive()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn n_is_locally_nilpotent_and_lowers_weight(a in arb_elem()) {
            let mut cur = a.clone();
            let bound = a.degree().unwrap_or(0) + 1;
            for _ in 0..bound {
                for (w, comp) in cur.weight_components() {
                    let img = comp.n_derive();
                    prop_assert!(img.is_zero() || img.homogeneous_weight() == Some(w - 2));
                }
                cur = cur.n_derive();
            }
            prop_assert!(cur.is_zero());
        }

        #[test]
        fn weight_is_a_grading(a in arb_elem(), b in arb_elem()) {
            let wa = a.weight_components();
            let wb = b.weight_components();
            let prod = a.mul_ref(&b).weight_components();
            let mut expect: BTreeMap<i64, SL2Elem> = BTreeMap::new();
            for (i, p) in &wa {
                for (j, r) in &wb {
                    let e = expect.entry(i + j).or_default();
                    *e = e.add_ref(&p.mul_ref(r));
                }
            }
            expect.retain(|_, e| !e.is_zero());
            prop_assert_eq!(prod, expect);
        }

        #[test]
        fn evaluation_is_a_ring_map(a in arb_elem(), b in arb_elem(), s in -3i64..4, t in -3i64..4) {
            // point (1, s; t, 1 + s t) lies on SL2
            let p = [q_int(1), q_int(s), q_int(t), q_int(1 + s * t)];
            prop_assert_eq!(a.mul_ref(&b).eval(&p), a.eval(&p) * b.eval(&p));
        }
    }
}
