use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{sparse_axpy, SparseEchelon, SparseVec};
use crate::scalars::{q_frac, q_int, Field, Q};

use super::algebra::{BasisElement, GCAlgebra};
use super::lie::FreeLie;

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn sign(o: bool) -> Q {
    if o {
        q_int(-1)
    } else {
        q_int(1)
    }
}

fn is_zero_vec(v: &SparseVec<Q>) -> bool {
    v.values().all(Field::is_zero)
}

fn clean(mut v: SparseVec<Q>) -> SparseVec<Q> {
    v.retain(|_, c| !c.is_zero());
    v
}

/// Finite-dimensional nilpotent differential graded Lie algebra, graded
/// cohomologically (the differential has degree +1).
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentDGLA {
    labels: Vec<String>,
    degrees: Vec<i64>,
    bracket: BTreeMap<(usize, usize), SparseVec<Q>>,
    differential: Vec<SparseVec<Q>>,
    class: usize,
}

impl NilpotentDGLA {
    /// Builds the algebra from bracket triples `(i, j, k, c)` meaning
    /// `[x_i, x_j] ∋ c·x_k` (all ordered pairs must be listed) and
    /// differential triples `(i, k, c)` meaning `d x_i ∋ c·x_k`. Fails when
    /// the lower central series does not terminate.
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<i64>,
        brackets: &[(usize, usize, usize, Q)],
        differential: &[(usize, usize, Q)],
    ) -> Result<Self> {
        let n = degrees.len();
        if labels.len() != n {
            return Err(Error::BadLabels);
        }
        let mut bracket: BTreeMap<(usize, usize), SparseVec<Q>> = BTreeMap::new();
        for (i, j, k, c) in brackets {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Invalid(format!("bracket triple ({i}, {j}, {k}) out of range")));
            }
            let e = bracket.entry((*i, *j)).or_default().entry(*k).or_insert_with(Q::zero);
            *e = e.add_ref(c);
        }
        let bracket = bracket.into_iter().map(|(k, v)| (k, clean(v))).filter(|(_, v)| !v.is_empty()).collect();
        let mut diff = vec![SparseVec::new(); n];
        for (i, k, c) in differential {
            if *i >= n || *k >= n {
                return Err(Error::Invalid(format!("differential pair ({i}, {k}) out of range")));
            }
            let e = diff[*i].entry(*k).or_insert_with(Q::zero);
            *e = e.add_ref(c);
        }
        let differential = diff.into_iter().map(clean).collect();
        let mut g = NilpotentDGLA { labels, degrees, bracket, differential, class: 0 };
        g.class = g.lower_central_class(&(0..n).collect::<Vec<_>>())?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn indices_of_degree(&self, k: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> SparseVec<Q> {
        self.bracket.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn d_basis(&self, i: usize) -> &SparseVec<Q> {
        &self.differential[i]
    }

    pub fn bracket(&self, x: &SparseVec<Q>, y: &SparseVec<Q>) -> SparseVec<Q> {
        let mut out = SparseVec::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(p) = self.bracket.get(&(*i, *j)) {
                    sparse_axpy(&mut out, &a.mul_ref(b), p);
                }
            }
        }
        out
    }

    pub fn d(&self, x: &SparseVec<Q>) -> SparseVec<Q> {
        let mut out = SparseVec::new();
        for (i, a) in x {
            sparse_axpy(&mut out, a, &self.differential[*i]);
        }
        out
    }

    /// Smallest `c` with `Γ^{c+1} = 0` for the subalgebra spanned by the given
    /// basis vectors, where `Γ^1` is that span and `Γ^{k+1} = [Γ^1, Γ^k]`.
    fn lower_central_class(&self, span: &[usize]) -> Result<usize> {
        if span.is_empty() {
            return Ok(0);
        }
        let gens: Vec<SparseVec<Q>> = span.iter().map(|&i| SparseVec::from([(i, Q::one())])).collect();
        let mut current = gens.clone();
        let mut class = 1;
        loop {
            let mut ech = SparseEchelon::new(false);
            let mut next = Vec::new();
            for x in &gens {
                for y in &current {
                    let b = self.bracket(x, y);
                    if !b.is_empty() && ech.insert(&b).is_some() {
                        next.push(b);
                    }
                }
            }
            if next.is_empty() {
                return Ok(class);
            }
            if class > self.dim() {
                return Err(Error::Invalid("lower central series does not terminate".into()));
            }
            current = next;
            class += 1;
        }
    }

    /// Nilpotency class of the degree-0 part, which governs the gauge group.
    pub fn degree_zero_class(&self) -> usize {
        self.lower_central_class(&self.indices_of_degree(0)).expect("subalgebra of a nilpotent algebra")
    }

    /// Checks antisymmetry, degree compatibility, graded Jacobi, the Leibniz
    /// rule for `d` and `d² = 0`, listing each failure.
    pub fn validate(&self) -> Vec<String> {
        let n = self.dim();
        let deg = &self.degrees;
        let mut failures = Vec::new();
        for ((i, j), v) in &self.bracket {
            if v.keys().any(|k| deg[*k] != deg[*i] + deg[*j]) {
                failures.push(format!("[{}, {}] has the wrong degree", self.labels[*i], self.labels[*j]));
            }
        }
        for i in 0..n {
            if self.differential[i].keys().any(|k| deg[*k] != deg[i] + 1) {
                failures.push(format!("d({}) has the wrong degree", self.labels[i]));
            }
            if !is_zero_vec(&self.d(&self.differential[i])) {
                failures.push(format!("d² ≠ 0 on {}", self.labels[i]));
            }
        }
        let e = |i: usize| SparseVec::from([(i, Q::one())]);
        for i in 0..n {
            for j in 0..n {
                let mut anti = self.bracket_basis(i, j);
                sparse_axpy(&mut anti, &sign(odd(deg[i] * deg[j])), &self.bracket_basis(j, i));
                if !is_zero_vec(&anti) {
                    failures.push(format!("antisymmetry fails for ({}, {})", self.labels[i], self.labels[j]));
                }
                // d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
                let mut lz = self.d(&self.bracket_basis(i, j));
                sparse_axpy(&mut lz, &-Q::one(), &self.bracket(&self.differential[i], &e(j)));
                sparse_axpy(&mut lz, &-sign(odd(deg[i])), &self.bracket(&e(i), &self.differential[j]));
                if !is_zero_vec(&lz) {
                    failures.push(format!("Leibniz rule fails for ({}, {})", self.labels[i], self.labels[j]));
                }
                for k in 0..n {
                    // (−1)^{|x||z|}[x,[y,z]] + cyclic = 0
                    let t1 = self.bracket(&e(i), &self.bracket_basis(j, k));
                    let t2 = self.bracket(&e(j), &self.bracket_basis(k, i));
                    let t3 = self.bracket(&e(k), &self.bracket_basis(i, j));
                    let mut s = SparseVec::new();
                    sparse_axpy(&mut s, &sign(odd(deg[i] * deg[k])), &t1);
                    sparse_axpy(&mut s, &sign(odd(deg[j] * deg[i])), &t2);
                    sparse_axpy(&mut s, &sign(odd(deg[k] * deg[j])), &t3);
                    if !is_zero_vec(&s) {
                        failures.push(format!(
                            "Jacobi fails for ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        failures
    }

    /// `g ⊗ A` with `[x⊗a, y⊗b] = (−1)^{|a||y|}[x,y]⊗ab` and
    /// `d(x⊗a) = dx⊗a + (−1)^{|x|} x⊗da`.
    pub fn tensor(&self, a: &GCAlgebra) -> Result<NilpotentDGLA> {
        let m = a.dim();
        let idx = |i: usize, j: usize| i * m + j;
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        for i in 0..self.dim() {
            for j in 0..m {
                labels.push(format!("{}⊗{}", self.labels[i], a.basis()[j].label));
                degrees.push(self.degrees[i] + a.degree(j) as i64);
            }
        }
        let mut brackets = Vec::new();
        for ((i, k), br) in &self.bracket {
            for ((j, l), p) in a.products() {
                let s = sign(odd(a.degree(*j) as i64 * self.degrees[*k]));
                for (x, c1) in br {
                    for (y, c2) in p {
                        brackets.push((idx(*i, *j), idx(*k, *l), idx(*x, *y), c1.mul_ref(c2).mul_ref(&s)));
                    }
                }
            }
        }
        let mut differential = Vec::new();
        for i in 0..self.dim() {
            for j in 0..m {
                for (k, c) in &self.differential[i] {
                    differential.push((idx(i, j), idx(*k, j), c.clone()));
                }
                let s = sign(odd(self.degrees[i]));
                for (l, c) in a.d_basis(j) {
                    differential.push((idx(i, j), idx(i, *l), c.mul_ref(&s)));
                }
            }
        }
        NilpotentDGLA::new(labels, degrees, &brackets, &differential)
    }

    fn homogeneous_of(&self, x: &SparseVec<Q>, k: i64) -> bool {
        x.iter().all(|(i, c)| c.is_zero() || self.degrees[*i] == k)
    }

    /// `ad_a^n(x)/n!` summed with the given coefficient sequence until the
    /// iterates vanish.
    fn ad_series(&self, a: &SparseVec<Q>, x: &SparseVec<Q>, coeff: impl Fn(usize) -> Q) -> SparseVec<Q> {
        let mut out = SparseVec::new();
        let mut term = x.clone();
        let mut n = 0;
        while !term.is_empty() {
            sparse_axpy(&mut out, &coeff(n), &term);
            term = clean(self.bracket(a, &term));
            n += 1;
            assert!(n <= self.dim() + 1, "ad_a is not nilpotent");
        }
        clean(out)
    }
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(q_int(1), |acc, k| acc * q_int(k))
}

/// Maurer–Cartan test `dω + ½[ω, ω] = 0` for a degree-1 element.
pub fn mc_check(l: &NilpotentDGLA, omega: &SparseVec<Q>) -> Result<bool> {
    if !l.homogeneous_of(omega, 1) {
        return Err(Error::WrongDegree("Maurer–Cartan elements have degree 1".into()));
    }
    let mut v = l.d(omega);
    sparse_axpy(&mut v, &q_frac(1, 2), &l.bracket(omega, omega));
    Ok(is_zero_vec(&v))
}

/// Gauge action of `exp(a)`, `a` of degree 0, on a Maurer–Cartan element:
/// `e^{ad a}(ω) − ((e^{ad a} − 1)/ad a)(da)`.
pub fn gauge_act(l: &NilpotentDGLA, a: &SparseVec<Q>, omega: &SparseVec<Q>) -> Result<SparseVec<Q>> {
    if !l.homogeneous_of(a, 0) {
        return Err(Error::WrongDegree("gauge elements have degree 0".into()));
    }
    if !mc_check(l, omega)? {
        return Err(Error::Invalid("input is not a Maurer–Cartan element".into()));
    }
    let mut out = l.ad_series(a, omega, |n| factorial(n).recip());
    let da = l.d(a);
    sparse_axpy(&mut out, &-Q::one(), &l.ad_series(a, &da, |n| factorial(n + 1).recip()));
    Ok(clean(out))
}

/// Campbell–Baker–Hausdorff product `log(e^a e^b)` of degree-0 elements,
/// exact for nilpotency class at most 4.
pub fn bch(l: &NilpotentDGLA, a: &SparseVec<Q>, b: &SparseVec<Q>) -> Result<SparseVec<Q>> {
    if !l.homogeneous_of(a, 0) || !l.homogeneous_of(b, 0) {
        return Err(Error::WrongDegree("group elements have degree 0".into()));
    }
    let class = l.degree_zero_class();
    if class > 4 {
        return Err(Error::Truncation(format!("BCH series implemented to class 4, algebra has class {class}")));
    }
    let br = |x: &SparseVec<Q>, y: &SparseVec<Q>| l.bracket(x, y);
    let ab = br(a, b);
    let aab = br(a, &ab);
    let bab = br(b, &ab);
    let baab = br(b, &aab);
    let mut out = SparseVec::new();
    sparse_axpy(&mut out, &q_int(1), a);
    sparse_axpy(&mut out, &q_int(1), b);
    sparse_axpy(&mut out, &q_frac(1, 2), &ab);
    sparse_axpy(&mut out, &q_frac(1, 12), &aab);
    sparse_axpy(&mut out, &q_frac(-1, 12), &bab);
    sparse_axpy(&mut out, &q_frac(-1, 24), &baab);
    Ok(clean(out))
}

/// Free graded Lie algebra on generators of the given cohomological degrees
/// (all `≤ 0`), modulo brackets of length above `class`, with zero
/// differential.
pub fn free_nilpotent(degrees: &[i64], class: usize) -> Result<NilpotentDGLA> {
    if degrees.iter().any(|&d| d > 0) {
        return Err(Error::WrongDegree("generators must have degree at most 0".into()));
    }
    let hom: Vec<i64> = degrees.iter().map(|d| -d).collect();
    let max_degree = hom.iter().max().copied().unwrap_or(0) * class as i64;
    let lie = FreeLie::new(hom.clone(), vec![(0i64, 0i64); hom.len()], class, max_degree);
    let mut labels = Vec::new();
    let mut degs = Vec::new();
    let mut elements = Vec::new();
    let mut offsets = BTreeMap::new();
    for (&(n, key), block) in lie.blocks() {
        offsets.insert((n, key), labels.len());
        for (i, t) in block.basis().iter().enumerate() {
            let name = if block.lengths()[i] == 1 {
                format!("x{}", t.terms().keys().next().expect("generator")[0])
            } else {
                format!("L{n}.{i}")
            };
            labels.push(name);
            degs.push(-n);
            elements.push(t.clone());
        }
    }
    let coords = |t: &super::tensor::Tensor| -> SparseVec<Q> {
        let mut out = SparseVec::new();
        for (bk, part) in lie.split(t) {
            let block = lie.block(bk.0, bk.1).expect("block");
            for (i, c) in block.coords(&part).expect("Lie element") {
                out.insert(offsets[&bk] + i, c);
            }
        }
        out
    };
    let mut brackets = Vec::new();
    for i in 0..elements.len() {
        for j in 0..elements.len() {
            for (k, c) in coords(&elements[i].bracket(&elements[j], &hom, Some(class))) {
                brackets.push((i, j, k, c));
            }
        }
    }
    NilpotentDGLA::new(labels, degs, &brackets, &[])
}

/// Sorts a product of generators into increasing order, returning the Koszul
/// sign, or `None` when an odd generator repeats.
fn normalize_monomial(m: &mut [u16], degs: &[i64]) -> Option<bool> {
    let mut neg = false;
    for i in 1..m.len() {
        let mut j = i;
        while j > 0 && m[j - 1] > m[j] {
            if odd(degs[m[j - 1] as usize]) && odd(degs[m[j] as usize]) {
                neg = !neg;
            }
            m.swap(j - 1, j);
            j -= 1;
        }
    }
    if m.windows(2).any(|w| w[0] == w[1] && odd(degs[w[0] as usize])) {
        return None;
    }
    Some(neg)
}

/// Chevalley–Eilenberg algebra `Sym(g^∨[−1])` truncated above degree
/// `bound`, with differential dual to `d_g` and to the bracket.
///
/// The cogenerator dual to `x` has degree `1 − |x|`, so every degree of `g`
/// must be at most 0.
pub fn chevalley_eilenberg(g: &NilpotentDGLA, bound: u32) -> Result<GCAlgebra> {
    let gdeg: Vec<i64> = g.degrees().iter().map(|d| 1 - d).collect();
    if gdeg.iter().any(|&d| d < 1) {
        return Err(Error::WrongDegree("cogenerators must have positive degree".into()));
    }
    let bound = bound as i64;
    // Monomials as nondecreasing generator sequences.
    let mut monos: Vec<Vec<u16>> = vec![vec![]];
    let mut frontier = vec![(vec![], 0i64)];
    while let Some((m, d)) = frontier.pop() {
        let start = m.last().copied().unwrap_or(0);
        for k in start..g.dim() as u16 {
            if m.last() == Some(&k) && odd(gdeg[k as usize]) {
                continue;
            }
            let nd = d + gdeg[k as usize];
            if nd > bound {
                continue;
            }
            let mut nm: Vec<u16> = m.clone();
            nm.push(k);
            monos.push(nm.clone());
            frontier.push((nm, nd));
        }
    }
    monos.sort_by(|a, b| {
        let da: i64 = a.iter().map(|&k| gdeg[k as usize]).sum();
        let db: i64 = b.iter().map(|&k| gdeg[k as usize]).sum();
        (da, a).cmp(&(db, b))
    });
    let index: HashMap<Vec<u16>, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let mdeg = |m: &[u16]| -> i64 { m.iter().map(|&k| gdeg[k as usize]).sum() };
    let label = |m: &[u16]| -> String {
        if m.is_empty() {
            return "1".into();
        }
        m.iter().map(|&k| format!("{}^∨", g.labels()[k as usize])).collect::<Vec<_>>().join("·")
    };
    let basis: Vec<BasisElement> = monos.iter().map(|m| BasisElement::new(&label(m), mdeg(m) as u32)).collect();
    let mul = |a: &[u16], b: &[u16]| -> Option<(usize, Q)> {
        let mut w: Vec<u16> = a.iter().chain(b).copied().collect();
        if mdeg(&w) > bound {
            return None;
        }
        let neg = normalize_monomial(&mut w, &gdeg)?;
        Some((index[&w], sign(neg)))
    };
    let mut products = Vec::new();
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            if let Some((k, s)) = mul(a, b) {
                products.push((i, j, k, s));
            }
        }
    }
    // d(x_k^∨) = −Σ_i ⟨x_k^∨, d x_i⟩ x_i^∨ − ½ Σ_{i,j} (−1)^{|x_i|} ⟨x_k^∨, [x_i, x_j]⟩ x_i^∨ x_j^∨
    let mut dgen: Vec<SparseVec<Q>> = vec![SparseVec::new(); g.dim()];
    for i in 0..g.dim() {
        for (k, c) in g.d_basis(i) {
            let e = dgen[*k].entry(index[&vec![i as u16]]).or_insert_with(Q::zero);
            *e = e.sub_ref(c);
        }
    }
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            let br = g.bracket_basis(i, j);
            if br.is_empty() {
                continue;
            }
            let Some((m, s)) = mul(&[i as u16], &[j as u16]) else { continue };
            let s = s.mul_ref(&sign(odd(g.degrees()[i]))).mul_ref(&q_frac(-1, 2));
            for (k, c) in br {
                let e = dgen[k].entry(m).or_insert_with(Q::zero);
                *e = e.add_ref(&c.mul_ref(&s));
            }
        }
    }
    let dgen: Vec<SparseVec<Q>> = dgen.into_iter().map(clean).collect();
    let mut differential = Vec::new();
    for (i, m) in monos.iter().enumerate() {
        let mut before = 0i64;
        for (p, &k) in m.iter().enumerate() {
            let s = sign(odd(before));
            for (t, c) in &dgen[k as usize] {
                // m[..p] · d(x_k) · m[p+1..]
                let left = mul(&m[..p], &monos[*t]);
                let Some((l, s1)) = left else { continue };
                let Some((r, s2)) = mul(&monos[l], &m[p + 1..]) else { continue };
                differential.push((i, r, c.mul_ref(&s).mul_ref(&s1).mul_ref(&s2)));
            }
            before += gdeg[k as usize];
        }
    }
    let a = GCAlgebra::new(basis, 0, &products, &differential, false)?;
    for i in 0..a.dim() {
        if !is_zero_vec(&a.d(a.d_basis(i))) {
            return Err(Error::IdentityFailed("Chevalley–Eilenberg differential does not square to zero".into()));
        }
    }
    Ok(a)
}
