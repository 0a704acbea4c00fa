use std::collections::BTreeMap;

use crate::scalars::{Field, Q};

/// A word in the generators of a free graded algebra.
pub type Word = Vec<u16>;

/// Element of the tensor algebra on graded generators, as a sparse map from
/// words to coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor {
    terms: BTreeMap<Word, Q>,
}

pub fn word_degree(w: &[u16], degs: &[i64]) -> i64 {
    w.iter().map(|&g| degs[g as usize]).sum()
}

fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor::default()
    }

    pub fn generator(g: u16) -> Self {
        Tensor::word(vec![g], Q::one())
    }

    pub fn word(w: Word, c: Q) -> Self {
        let mut t = Tensor::zero();
        t.add_term(w, c);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn coeff(&self, w: &[u16]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree of any word; meaningful for homogeneous elements.
    pub fn degree(&self, degs: &[i64]) -> Option<i64> {
        self.terms.keys().next().map(|w| word_degree(w, degs))
    }

    /// Length of the shortest word.
    pub fn min_length(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).min()
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = v.add_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Q, o: &Tensor) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &o.terms {
            self.add_term(w.clone(), c.mul_ref(v));
        }
    }

    pub fn scale(&self, c: &Q) -> Tensor {
        let mut out = Tensor::zero();
        out.add_scaled(c, self);
        out
    }

    /// Concatenation product, dropping words longer than `max_len`.
    pub fn concat(&self, o: &Tensor, max_len: Option<usize>) -> Tensor {
        let mut out = Tensor::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                if max_len.is_some_and(|n| w1.len() + w2.len() > n) {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1.mul_ref(c2));
            }
        }
        out
    }

    /// Graded commutator `xy − (−1)^{|x||y|} yx` of homogeneous elements.
    pub fn bracket(&self, o: &Tensor, degs: &[i64], max_len: Option<usize>) -> Tensor {
        let (Some(a), Some(b)) = (self.degree(degs), o.degree(degs)) else {
            return Tensor::zero();
        };
        let mut out = self.concat(o, max_len);
        out.add_scaled(&-sign(a * b % 2 != 0), &o.concat(self, max_len));
        out
    }

    /// Extends a map on generators to a derivation of parity `odd`:
    /// `D(w_1⋯w_k) = Σ_j ± w_1⋯D(w_j)⋯w_k` with the Koszul sign of moving `D`
    /// past `w_1⋯w_{j−1}`.
    pub fn derivation(
        &self,
        degs: &[i64],
        odd: bool,
        on_generator: &dyn Fn(u16) -> Tensor,
        max_len: Option<usize>,
    ) -> Tensor {
        let mut out = Tensor::zero();
        for (w, c) in &self.terms {
            let mut before = 0i64;
            for j in 0..w.len() {
                let img = on_generator(w[j]);
                let s = sign(odd && before % 2 != 0);
                for (iw, ic) in img.terms() {
                    let len = w.len() - 1 + iw.len();
                    if max_len.is_some_and(|n| len > n) {
                        continue;
                    }
                    let mut nw = Vec::with_capacity(len);
                    nw.extend_from_slice(&w[..j]);
                    nw.extend_from_slice(iw);
                    nw.extend_from_slice(&w[j + 1..]);
                    out.add_term(nw, c.mul_ref(ic).mul_ref(&s));
                }
                before += degs[w[j] as usize];
            }
        }
        out
    }

    /// Keeps only words of length `len`.
    pub fn length_component(&self, len: usize) -> Tensor {
        Tensor { terms: self.terms.iter().filter(|(w, _)| w.len() == len).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::q_int;

    #[test]
    fn odd_generators_square_to_nonzero() {
        let degs = [1];
        let s = Tensor::generator(0);
        let b = s.bracket(&s, &degs, None);
        assert_eq!(b, Tensor::word(vec![0, 0], q_int(2)));
        let even = [2];
        assert!(s.bracket(&s, &even, None).is_zero());
    }

    #[test]
    fn graded_jacobi() {
        let degs = [1, 2, 1];
        let (a, b, c) = (Tensor::generator(0), Tensor::generator(1), Tensor::generator(2));
        let br = |x: &Tensor, y: &Tensor| x.bracket(y, &degs, None);
        // (−1)^{|a||c|}[a,[b,c]] + (−1)^{|b||a|}[b,[c,a]] + (−1)^{|c||b|}[c,[a,b]] = 0
        let mut t = br(&a, &br(&b, &c)).scale(&q_int(-1));
        t.add_scaled(&q_int(1), &br(&b, &br(&c, &a)));
        t.add_scaled(&q_int(1), &br(&c, &br(&a, &b)));
        assert!(t.is_zero());
    }

    #[test]
    fn odd_derivation_squares() {
        // D(x) = y with |x| = 2, |y| = 1 and D(y) = 0, extended to words.
        let degs = [2, 1];
        let d = |g: u16| if g == 0 { Tensor::generator(1) } else { Tensor::zero() };
        let w = Tensor::word(vec![0, 0, 1], q_int(1));
        let once = w.derivation(&degs, true, &d, None);
        let twice = once.derivation(&degs, true, &d, None);
        assert!(twice.is_zero());
    }
}
