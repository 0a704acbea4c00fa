use std::collections::BTreeMap;

use crate::scalars::{Field, Mono, SL2Elem, Q};

use super::package::KahlerPackage;
use super::twisted::{SlOp, TwistedComplex};

pub type Word = Vec<u16>;

/// Element of the tensor coalgebra `T(A[1]) ⊗ O(SL₂)`, as words in a fixed
/// basis with ring coefficients. Words of length `n` represent classes in
/// `CoLie^n(A[1])` after the shuffle quotient.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SlTensor {
    terms: BTreeMap<Word, SL2Elem>,
}

impl SlTensor {
    pub fn zero() -> Self {
        SlTensor::default()
    }

    pub fn word(w: Word, c: SL2Elem) -> Self {
        let mut t = SlTensor::zero();
        t.add_term(w, c);
        t
    }

    /// `v₁ ⊗ ⋯ ⊗ vₙ` for vectors with rational entries.
    pub fn product_of(vectors: &[Vec<Q>]) -> Self {
        let mut acc: BTreeMap<Word, Q> = BTreeMap::from([(Vec::new(), Q::one())]);
        for v in vectors {
            let mut next = BTreeMap::new();
            for (w, c) in &acc {
                for (i, a) in v.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(i as u16);
                    next.insert(w2, c.mul_ref(a));
                }
            }
            acc = next;
        }
        let mut t = SlTensor::zero();
        for (w, c) in acc {
            t.add_term(w, SL2Elem::constant(c));
        }
        t
    }

    pub fn add_term(&mut self, w: Word, c: SL2Elem) {
        if c.is_zero() {
            return;
        }
        let next = match self.terms.remove(&w) {
            Some(old) => old.add_ref(&c),
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(w, next);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, SL2Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &SlTensor) -> SlTensor {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &SlTensor) -> SlTensor {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SlTensor {
        SlTensor { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, c: &SL2Elem) -> SlTensor {
        let mut out = SlTensor::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> SlTensor {
        self.scale(&SL2Elem::constant(c.clone()))
    }

    /// Coefficientwise action of the derivation `N`.
    pub fn n_derive(&self) -> SlTensor {
        let mut out = SlTensor::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.n_derive());
        }
        out
    }

    /// Component of word length `n`.
    pub fn length_component(&self, n: usize) -> SlTensor {
        SlTensor { terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Splits coefficients by monomial: one rational tensor per monomial.
    pub fn by_monomial(&self) -> BTreeMap<Mono, BTreeMap<Word, Q>> {
        let mut out: BTreeMap<Mono, BTreeMap<Word, Q>> = BTreeMap::new();
        for (w, c) in &self.terms {
            for (m, a) in c.terms() {
                out.entry(*m).or_default().insert(w.clone(), a.clone());
            }
        }
        out
    }
}

/// An O(SL₂)-linear map in sparse column form with a cohomological degree.
#[derive(Clone, Debug)]
pub struct LinOp {
    cols: Vec<Vec<(u16, SL2Elem)>>,
    degree: i64,
}

impl LinOp {
    pub fn new(op: &SlOp, degree: i64) -> Self {
        let cols = (0..op.cols())
            .map(|j| {
                (0..op.rows())
                    .filter_map(|i| {
                        let e = op.entry(i, j);
                        (!e.is_zero()).then_some((i as u16, e))
                    })
                    .collect()
            })
            .collect();
        LinOp { cols, degree }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }
}

/// The tensor coalgebra on a package: product and differential of `E(A)`,
/// and the coderivation and morphism extensions of linear maps.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    degrees: Vec<i64>,
    products: BTreeMap<(u16, u16), Vec<(u16, Q)>>,
}

fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

impl Coalgebra {
    pub fn new(p: &KahlerPackage) -> Self {
        let a = p.algebra();
        let degrees = (0..a.dim()).map(|i| a.degree(i) as i64).collect();
        let products = a
            .products()
            .iter()
            .map(|((i, j), v)| ((*i as u16, *j as u16), v.iter().map(|(k, c)| (*k as u16, c.clone())).collect()))
            .collect();
        Coalgebra { degrees, products }
    }

    /// Shifted degree of a word: `Σ (|wᵢ| − 1)`.
    pub fn shifted_degree(&self, w: &[u16]) -> i64 {
        w.iter().map(|&g| self.degrees[g as usize] - 1).sum()
    }

    /// Unshifted degree sum `Σ |wᵢ|`.
    pub fn degree_sum(&self, w: &[u16]) -> i64 {
        w.iter().map(|&g| self.degrees[g as usize]).sum()
    }

    /// Coderivation extension of a linear map `φ` of degree `k`:
    /// `φ(sa₁ ⊗ ⋯ ⊗ saₙ) = Σ ± sa₁ ⊗ ⋯ ⊗ s(φaᵢ) ⊗ ⋯ ⊗ saₙ`, where the
    /// sign is `(−1)^k` from the suspension and `(−1)^{k·Σ_{j<i}(|aⱼ| − 1)}`
    /// from the Koszul rule.
    pub fn coder(&self, op: &LinOp, t: &SlTensor) -> SlTensor {
        let k = op.degree;
        let mut out = SlTensor::zero();
        for (w, c) in t.terms() {
            let mut before = 0i64;
            for i in 0..w.len() {
                let s = sign((k * (before + 1)).rem_euclid(2) == 1);
                for (r, e) in &op.cols[w[i] as usize] {
                    let mut w2 = w.clone();
                    w2[i] = *r;
                    out.add_term(w2, c.mul_ref(e).scale(&s));
                }
                before += self.degrees[w[i] as usize] - 1;
            }
        }
        out
    }

    /// Morphism extension `φ ⊗ ⋯ ⊗ φ` of a degree-0 map, possibly into
    /// another basis.
    pub fn morph(&self, op: &LinOp, t: &SlTensor) -> SlTensor {
        assert_eq!(op.degree, 0, "morphism extension needs a degree-0 map");
        let mut out = SlTensor::zero();
        for (w, c) in t.terms() {
            let mut acc: Vec<(Word, SL2Elem)> = vec![(Vec::with_capacity(w.len()), c.clone())];
            for &g in w {
                let col = &op.cols[g as usize];
                let mut next = Vec::with_capacity(acc.len() * col.len());
                for (pre, a) in &acc {
                    for (r, e) in col {
                        let mut w2 = pre.clone();
                        w2.push(*r);
                        next.push((w2, a.mul_ref(e)));
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            for (w2, a) in acc {
                out.add_term(w2, a);
            }
        }
        out
    }

    /// The product coderivation `q`, with
    /// `q(sa ⊗ sb) = (−1)^{|a|} s(ab)` on adjacent factors.
    pub fn q(&self, t: &SlTensor) -> SlTensor {
        let mut out = SlTensor::zero();
        for (w, c) in t.terms() {
            let mut before = 0i64;
            for i in 0..w.len().saturating_sub(1) {
                let di = self.degrees[w[i] as usize];
                if let Some(prod) = self.products.get(&(w[i], w[i + 1])) {
                    let s = sign((before + di).rem_euclid(2) == 1);
                    for (k, a) in prod {
                        let mut w2 = Vec::with_capacity(w.len() - 1);
                        w2.extend_from_slice(&w[..i]);
                        w2.push(*k);
                        w2.extend_from_slice(&w[i + 2..]);
                        out.add_term(w2, c.scale(&a.mul_ref(&s)));
                    }
                }
                before += di - 1;
            }
        }
        out
    }
}

/// Operators of the twisted complex in the form used by the transfer
/// formulas, all acting on `T(A[1]) ⊗ O(SL₂)`.
#[derive(Clone, Debug)]
pub struct CoderivationPipeline {
    pub coalgebra: Coalgebra,
    pub twisted: TwistedComplex,
    pub d: LinOp,
    pub dc: LinOp,
    pub h_i: LinOp,
    pub h_p: LinOp,
    pub g_lambda: LinOp,
    pub g2_dd: LinOp,
    pub pr_z: LinOp,
    pub pr_h: LinOp,
    /// Harmonic coordinates `(BᵀgB)⁻¹Bᵀg`, a map from `A` to `ℚ^{dim H}`.
    pub harm_coords: LinOp,
    /// Harmonic basis as a map `ℚ^{dim H} → A`.
    pub harm_basis: LinOp,
    harmonic: Vec<Vec<Q>>,
    unit: usize,
}

/// Result of homotopy transfer at one input: the homotopy `γ(t)` and the
/// transferred value, computed both from `f + [d_E, γ]` and from the
/// closed expression.
#[derive(Clone, Debug, PartialEq)]
pub struct Transfer {
    pub gamma: SlTensor,
    pub value: SlTensor,
    pub closed: SlTensor,
}

impl Transfer {
    pub fn consistent(&self) -> bool {
        self.value == self.closed
    }
}

impl CoderivationPipeline {
    pub fn new(p: &KahlerPackage) -> Self {
        let tw = TwistedComplex::new(p);
        let n = p.dim();
        let harmonic = p.harmonic().to_vec();
        let h = harmonic.len();
        let basis = crate::linalg::Matrix::from_cols(&harmonic, n);
        let coords = if h == 0 {
            crate::linalg::Matrix::zeros(0, n)
        } else {
            let bt_g = basis.transpose().mul_ref(p.gram());
            bt_g.mul_ref(&basis).inverse().expect("positive definite").mul_ref(&bt_g)
        };
        CoderivationPipeline {
            coalgebra: Coalgebra::new(p),
            d: LinOp::new(&tw.d, 1),
            dc: LinOp::new(&tw.dc, 1),
            h_i: LinOp::new(&tw.h_i, -1),
            h_p: LinOp::new(&tw.h_p, -1),
            g_lambda: LinOp::new(&tw.g_lambda, -2),
            g2_dd: LinOp::new(&tw.g2_dd, -2),
            pr_z: LinOp::new(&tw.pr_z, 0),
            pr_h: LinOp::new(&tw.pr_h, 0),
            harm_coords: LinOp::new(&SlOp::constant(coords), 0),
            harm_basis: LinOp::new(&SlOp::constant(basis), 0),
            twisted: tw,
            harmonic,
            unit: p.algebra().unit(),
        }
    }

    pub fn harmonic(&self) -> &[Vec<Q>] {
        &self.harmonic
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn coder(&self, op: &LinOp, t: &SlTensor) -> SlTensor {
        self.coalgebra.coder(op, t)
    }

    pub fn morph(&self, op: &LinOp, t: &SlTensor) -> SlTensor {
        self.coalgebra.morph(op, t)
    }

    pub fn q(&self, t: &SlTensor) -> SlTensor {
        self.coalgebra.q(t)
    }

    /// `q_H = pr_H ∘ q` on tensors of harmonic forms.
    pub fn q_h(&self, t: &SlTensor) -> SlTensor {
        self.morph(&self.pr_h, &self.q(t))
    }

    /// `d_E = D̃ + q`.
    pub fn d_e(&self, t: &SlTensor) -> SlTensor {
        self.coder(&self.d, t).add(&self.q(t))
    }

    /// `[q, h] = qh + hq` for an odd linear map `h`.
    pub fn q_bracket_odd(&self, h: &LinOp, t: &SlTensor) -> SlTensor {
        self.q(&self.coder(h, t)).add(&self.coder(h, &self.q(t)))
    }

    /// `[q, X] = qX − Xq` for an even linear map `X`.
    pub fn q_bracket_even(&self, x: &LinOp, t: &SlTensor) -> SlTensor {
        self.q(&self.coder(x, t)).sub(&self.coder(x, &self.q(t)))
    }

    /// `Σ_{n≥0} (−1)^n Tⁿ(t)` for an operator lowering word length.
    fn alternating<T: Fn(&SlTensor) -> SlTensor>(t: &SlTensor, op: T) -> Vec<SlTensor> {
        let mut out = Vec::new();
        let mut cur = t.clone();
        let mut n = 0usize;
        let cap = t.max_length() + 1;
        while !cur.is_zero() && n <= cap {
            out.push(if n % 2 == 0 { cur.clone() } else { cur.neg() });
            cur = op(&cur);
            n += 1;
        }
        out
    }

    /// `γ^i(f)(t) = Σ (−1)^{n+1} h_i [q, h_i]ⁿ (f + h_i[q, f])(t)` for an even
    /// coderivation `f: E(Z) → E(A)` given by evaluation.
    pub fn gamma_i(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> SlTensor {
        let y0 = self.gamma_i_seed(f, t);
        let mut out = SlTensor::zero();
        for term in Self::alternating(&y0, |x| self.q_bracket_odd(&self.h_i, x)) {
            out = out.sub(&self.coder(&self.h_i, &term));
        }
        out
    }

    fn gamma_i_seed(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> SlTensor {
        let ft = f(t);
        let qf = self.q(&ft).sub(&f(&self.q(t)));
        ft.add(&self.coder(&self.h_i, &qf))
    }

    /// Transfer along `i: Z → A`: returns `γ^i(f)(t)` and `f'(t)` with
    /// `f' = f + [d_E, γ^i(f)]`, together with the closed expression
    /// `pr_Z ∘ Σ (−1)ⁿ [q, h_i]ⁿ (f + h_i[q, f])`.
    pub fn transfer_gamma_i(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> Transfer {
        let gamma = self.gamma_i(f, t);
        let value = f(t).add(&self.d_e(&gamma)).add(&self.gamma_i(f, &self.d_e(t)));
        let closed = self.closed_i(f, t);
        Transfer { gamma, value, closed }
    }

    fn closed_i(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> SlTensor {
        let y0 = self.gamma_i_seed(f, t);
        let mut sum = SlTensor::zero();
        for term in Self::alternating(&y0, |x| self.q_bracket_odd(&self.h_i, x)) {
            sum = sum.add(&term);
        }
        self.morph(&self.pr_z, &sum)
    }

    /// `[q, f] = q_H f − f q` for an even coderivation `f: E(Z) → E(H)`.
    fn q_f_h(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> SlTensor {
        self.q_h(&f(t)).sub(&f(&self.q(t)))
    }

    /// `(f + [q, f]∘h_p)(t)`.
    fn lp_head(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> SlTensor {
        f(t).add(&self.q_f_h(f, &self.coder(&self.h_p, t)))
    }

    /// `γ^p(f)(t) = Σ (−1)^{n+1} (f + [q, f]∘h_p)([q, h_p]ⁿ h_p t)`.
    pub fn gamma_p(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> SlTensor {
        let start = self.coder(&self.h_p, t);
        let mut out = SlTensor::zero();
        for term in Self::alternating(&start, |x| self.q_bracket_odd(&self.h_p, x)) {
            out = out.sub(&self.lp_head(f, &term));
        }
        out
    }

    /// Transfer along `p: Z → H`: returns `γ^p(f)(t)` and
    /// `f + [d_E, γ^p(f)]` at `t`, with the closed expression
    /// `Σ (−1)ⁿ (f + [q, f]∘h_p)∘[q, h_p]ⁿ ∘ pr_H`.
    pub fn transfer_gamma_p(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> Transfer {
        let gamma = self.gamma_p(f, t);
        let value = f(t).add(&self.q_h(&gamma)).add(&self.gamma_p(f, &self.d_e(t)));
        let start = self.morph(&self.pr_h, t);
        let mut closed = SlTensor::zero();
        for term in Self::alternating(&start, |x| self.q_bracket_odd(&self.h_p, x)) {
            closed = closed.add(&self.lp_head(f, &term));
        }
        Transfer { gamma, value, closed }
    }

    /// `[d_E, f](t)` for an even coderivation along a map into `A`; zero
    /// exactly when `f` satisfies the cycle condition at `t`.
    pub fn cycle_defect(&self, f: &dyn Fn(&SlTensor) -> SlTensor, t: &SlTensor) -> SlTensor {
        self.d_e(&f(t)).sub(&f(&self.d_e(t)))
    }

    /// `N` transferred to `E(Z)`: `pr_Z ∘ Σ (−1)ⁿ [q, h_i]ⁿ ∘ N`.
    pub fn n_on_z(&self, t: &SlTensor) -> SlTensor {
        let nf = |x: &SlTensor| x.n_derive();
        self.closed_i(&nf, t)
    }

    /// `p ∘ f'` for `f'` the transfer of `N` to `E(Z)`.
    pub fn n_on_z_to_h(&self, t: &SlTensor) -> SlTensor {
        self.morph(&self.pr_h, &self.n_on_z(t))
    }

    /// `γ^i(N)(t)`.
    pub fn gamma_n(&self, t: &SlTensor) -> SlTensor {
        let nf = |x: &SlTensor| x.n_derive();
        self.gamma_i(&nf, t)
    }

    /// Image under `s` of a word in harmonic coordinates.
    pub fn harmonic_word(&self, w: &[u16]) -> SlTensor {
        let vs: Vec<Vec<Q>> = w.iter().map(|&g| self.harmonic[g as usize].clone()).collect();
        SlTensor::product_of(&vs)
    }

    /// Rewrites a tensor of harmonic forms in harmonic coordinates.
    pub fn to_harmonic_coords(&self, t: &SlTensor) -> SlTensor {
        self.morph(&self.harm_coords, t)
    }

    pub fn from_harmonic_coords(&self, t: &SlTensor) -> SlTensor {
        self.morph(&self.harm_basis, t)
    }
}
