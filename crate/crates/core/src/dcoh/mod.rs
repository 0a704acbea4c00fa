//! Deligne cohomology dimensions from a Hodge diamond, and weight series of
//! Archimedean cohomology through the mapping cone of `N` on O(SL₂).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::scalars::{Field, Mono, SL2Elem, Q};

/// Hodge numbers `h^{p,q}` of a compact Kähler manifold of complex dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDiamond {
    n: u32,
    h: BTreeMap<(u32, u32), usize>,
}

impl HodgeDiamond {
    pub fn new(n: u32, entries: impl IntoIterator<Item = ((u32, u32), usize)>) -> Result<Self> {
        let mut h = BTreeMap::new();
        for ((p, q), v) in entries {
            if p > n || q > n {
                return Err(Error::Invalid(format!("h^{{{p},{q}}} outside the diamond of dimension {n}")));
            }
            if v > 0 {
                h.insert((p, q), v);
            }
        }
        if h.iter().any(|(&(p, q), v)| h.get(&(q, p)) != Some(v)) {
            return Err(Error::Invalid("Hodge numbers must satisfy h^{p,q} = h^{q,p}".into()));
        }
        Ok(HodgeDiamond { n, h })
    }

    pub fn point() -> Self {
        HodgeDiamond::new(0, [((0, 0), 1)]).expect("valid")
    }

    pub fn projective_space(n: u32) -> Self {
        HodgeDiamond::new(n, (0..=n).map(|p| ((p, p), 1))).expect("valid")
    }

    pub fn elliptic_curve() -> Self {
        HodgeDiamond::new(1, [((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)]).expect("valid")
    }

    pub fn k3() -> Self {
        HodgeDiamond::new(2, [((0, 0), 1), ((2, 0), 1), ((0, 2), 1), ((1, 1), 20), ((2, 2), 1)]).expect("valid")
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn h(&self, p: i64, q: i64) -> usize {
        if p < 0 || q < 0 {
            return 0;
        }
        self.h.get(&(p as u32, q as u32)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), usize> {
        &self.h
    }

    pub fn betti(&self, m: i64) -> usize {
        (0..=m).map(|p| self.h(p, m - p)).sum()
    }

    /// Sum of `h^{p,q}` over `p + q = m` with `p` and `q` both in the range.
    fn sum_where(&self, m: i64, pred: impl Fn(i64, i64) -> bool) -> usize {
        (0..=m).filter(|&p| pred(p, m - p)).map(|p| self.h(p, m - p)).sum()
    }
}

/// `dim H^m_D(X, ℝ(a))` from the short exact sequence
/// `0 → H^{m−1}(X, ℂ)/(F^a + H^{m−1}(X, ℝ(a))) → H^m_D → γ^a H^m(X, ℝ(a)) → 0`.
pub fn deligne_dim_seq(h: &HodgeDiamond, m: i64, a: i64) -> usize {
    let n = m - 1;
    let quotient = (h.betti(n) + h.sum_where(n, |p, q| p >= a && q >= a))
        .saturating_sub(2 * h.sum_where(n, |p, _| p >= a));
    quotient + h.sum_where(m, |p, q| p >= a && q >= a)
}

/// `dim H^m_D(X, ℝ(a))` as the type-`(a, a)` summand of harmonic forms.
pub fn deligne_dim_split(h: &HodgeDiamond, m: i64, a: i64) -> usize {
    h.sum_where(m, |p, q| p >= a && q >= a) + h.sum_where(m - 1, |p, q| p < a && q < a)
}

/// One row of the `(m, a)` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeligneRow {
    pub m: i64,
    pub a: i64,
    pub seq: usize,
    pub split: usize,
}

/// Both Deligne dimensions for `0 ≤ m ≤ 2n` and `0 ≤ a ≤ n + 1`.
pub fn deligne_table(h: &HodgeDiamond) -> Vec<DeligneRow> {
    let n = h.dim() as i64;
    let mut out = Vec::new();
    for m in 0..=2 * n {
        for a in 0..=n + 1 {
            out.push(DeligneRow { m, a, seq: deligne_dim_seq(h, m, a), split: deligne_dim_split(h, m, a) });
        }
    }
    out
}

/// Finite window of O(SL₂): normal-form monomials of degree at most
/// `max_degree` and weight in `[r_min, r_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightWindow {
    pub max_degree: u32,
    pub r_min: i64,
    pub r_max: i64,
}

/// Normal-form monomials of degree at most `max_degree`.
pub fn normal_monomials(max_degree: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for a in 0..=max_degree {
        for b in 0..=max_degree - a {
            for c in 0..=max_degree - a - b {
                for d in 0..=max_degree - a - b - c {
                    let m = Mono([a, b, c, d]);
                    if m.is_normal() {
                        out.push(m);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Weight series of `gr^M H^q` of Archimedean cohomology within a window,
/// together with the kernel and cokernel series of `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchimedeanSeries {
    /// `r ↦ b_q · dim O(SL₂)_r`.
    pub total: BTreeMap<i64, usize>,
    /// `r ↦ b_q · #{u^a v^b : −a − b = r}`.
    pub ker_n: BTreeMap<i64, usize>,
    /// `r ↦ b_q · #{x^c y^d : c + d + 2 = r}`, the cokernel living in O(SL₂)(−1).
    pub coker_n: BTreeMap<i64, usize>,
}

pub fn archimedean_hilbert(h: &HodgeDiamond, q: i64, window: &WeightWindow) -> Result<ArchimedeanSeries> {
    if window.r_min > window.r_max {
        return Err(Error::Invalid("empty weight range".into()));
    }
    let b = h.betti(q);
    let mut total = BTreeMap::new();
    let mut ker_n = BTreeMap::new();
    let mut coker_n = BTreeMap::new();
    for r in window.r_min..=window.r_max {
        total.insert(r, 0);
        ker_n.insert(r, 0);
        coker_n.insert(r, 0);
    }
    for m in normal_monomials(window.max_degree) {
        let [a, bb, c, d] = m.0;
        let r = m.weight();
        if let Some(t) = total.get_mut(&r) {
            *t += b;
        }
        if c == 0 && d == 0 {
            if let Some(t) = ker_n.get_mut(&r) {
                *t += b;
            }
        }
        if a == 0 && bb == 0 {
            if let Some(t) = coker_n.get_mut(&(r + 2)) {
                *t += b;
            }
        }
    }
    Ok(ArchimedeanSeries { total, ker_n, coker_n })
}

/// Linear algebra certificate for the cone of `N` on a window of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub passed: bool,
    /// Kernel of `N` on the window, as normal-form monomials when the kernel
    /// is spanned by monomials.
    pub kernel: Vec<String>,
    pub kernel_dim: usize,
    pub image_rank: usize,
    /// Whether the image of `N` and the `x, y`-monomials of the window span it.
    pub coker_complement: bool,
}

/// Checks on an `N`-closed window that `ker N` is spanned by the `u, v`
/// monomials and that the `x, y` monomials complement the image of `N`.
pub fn rjc_cone_check(window: &[Mono]) -> Result<ConeReport> {
    let set: BTreeSet<Mono> = window.iter().copied().collect();
    if set.iter().any(|m| !m.is_normal()) {
        return Err(Error::Invalid("window monomials must be in normal form".into()));
    }
    let index: BTreeMap<Mono, usize> = set.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let k = set.len();
    let mut cols: Vec<SparseVec<Q>> = Vec::with_capacity(k);
    for m in &set {
        let img = SL2Elem::term(*m, Q::one()).n_derive();
        let mut v = SparseVec::new();
        for (t, c) in img.terms() {
            let Some(&i) = index.get(t) else {
                return Err(Error::Invalid(format!("window is not closed under N: {t:?}")));
            };
            v.insert(i, c.clone());
        }
        cols.push(v);
    }
    let mat = Matrix::from_fn(k, k, |i, j| cols[j].get(&i).cloned().unwrap_or_else(Q::zero));
    let kernel = mat.kernel();
    let image_rank = k - kernel.len();
    let uv: Vec<usize> = set.iter().filter(|m| m.0[2] == 0 && m.0[3] == 0).map(|m| index[m]).collect();
    let xy: Vec<usize> = set.iter().filter(|m| m.0[0] == 0 && m.0[1] == 0).map(|m| index[m]).collect();
    let uv_in_kernel = uv.iter().all(|&i| cols[i].is_empty());
    let kernel_ok = uv_in_kernel && kernel.len() == uv.len();
    let mut span = mat.clone();
    if !xy.is_empty() {
        let extra = Matrix::from_fn(k, xy.len(), |i, j| if i == xy[j] { Q::one() } else { Q::zero() });
        span = span.hstack(&extra);
    }
    let coker_complement = span.rank() == k && image_rank + xy.len() == k;
    let names: Vec<String> = if kernel_ok {
        uv.iter().map(|&i| SL2Elem::term(*set.iter().nth(i).expect("indexed"), Q::one()).to_string()).collect()
    } else {
        Vec::new()
    };
    Ok(ConeReport {
        passed: kernel_ok && coker_complement,
        kernel: names,
        kernel_dim: kernel.len(),
        image_rank,
        coker_complement,
    })
}
