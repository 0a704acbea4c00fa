use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sparse_axpy, SparseEchelon, SparseVec};
use crate::scalars::{q_int, Field, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitype: Option<(i64, i64)>,
}

impl BasisElement {
    pub fn new(label: &str, degree: u32) -> Self {
        BasisElement { label: label.to_string(), degree, bitype: None }
    }

    pub fn typed(label: &str, p: i64, q: i64) -> Self {
        BasisElement { label: label.to_string(), degree: (p + q) as u32, bitype: Some((p, q)) }
    }
}

/// Finite-dimensional graded-commutative differential algebra over ℚ, given
/// by structure constants in a fixed basis.
///
/// The augmentation is the coordinate of the unit basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct GCAlgebra {
    basis: Vec<BasisElement>,
    unit: usize,
    product: BTreeMap<(usize, usize), SparseVec<Q>>,
    differential: Vec<SparseVec<Q>>,
}

fn koszul(a: u32, b: u32) -> Q {
    if a % 2 == 1 && b % 2 == 1 {
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

impl GCAlgebra {
    /// Builds an algebra from product triples `(i, j, k, c)` meaning
    /// `e_i·e_j ∋ c·e_k` and differential triples `(i, j, c)` meaning
    /// `d(e_i) ∋ c·e_j`.
    ///
    /// With `complete`, products with the unit are filled in and each triple
    /// `(i, j, k, c)` without a given `(j, i)` counterpart is mirrored with the
    /// Koszul sign.
    pub fn new(
        basis: Vec<BasisElement>,
        unit: usize,
        products: &[(usize, usize, usize, Q)],
        differential: &[(usize, usize, Q)],
        complete: bool,
    ) -> Result<Self> {
        let n = basis.len();
        if unit >= n {
            return Err(Error::Invalid(format!("unit index {unit} out of range")));
        }
        let mut product: BTreeMap<(usize, usize), SparseVec<Q>> = BTreeMap::new();
        for (i, j, k, c) in products {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Invalid(format!("product triple ({i}, {j}, {k}) out of range")));
            }
            let e = product.entry((*i, *j)).or_default().entry(*k).or_insert_with(Q::zero);
            *e = e.add_ref(c);
        }
        if complete {
            let given: Vec<(usize, usize)> = product.keys().copied().collect();
            for (i, j) in given {
                if i != j && !product.contains_key(&(j, i)) {
                    let s = koszul(basis[i].degree, basis[j].degree);
                    let v: SparseVec<Q> = product[&(i, j)].iter().map(|(k, c)| (*k, c.mul_ref(&s))).collect();
                    product.insert((j, i), v);
                }
            }
            for i in 0..n {
                product.entry((unit, i)).or_insert_with(|| SparseVec::from([(i, Q::one())]));
                product.entry((i, unit)).or_insert_with(|| SparseVec::from([(i, Q::one())]));
            }
        }
        let product = product.into_iter().map(|(k, v)| (k, clean(v))).filter(|(_, v)| !v.is_empty()).collect();
        let mut diff = vec![SparseVec::new(); n];
        for (i, j, c) in differential {
            if *i >= n || *j >= n {
                return Err(Error::Invalid(format!("differential pair ({i}, {j}) out of range")));
            }
            let e = diff[*i].entry(*j).or_insert_with(Q::zero);
            *e = e.add_ref(c);
        }
        let differential = diff.into_iter().map(clean).collect();
        Ok(GCAlgebra { basis, unit, product, differential })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn bitype(&self, i: usize) -> Option<(i64, i64)> {
        self.basis[i].bitype
    }

    pub fn is_bityped(&self) -> bool {
        self.basis.iter().all(|b| b.bitype.is_some())
    }

    pub fn max_degree(&self) -> u32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn indices_of_degree(&self, k: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == k).collect()
    }

    /// Basis indices spanning the augmentation ideal.
    pub fn augmentation_ideal(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.unit).collect()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> SparseVec<Q> {
        self.product.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), SparseVec<Q>> {
        &self.product
    }

    pub fn d_basis(&self, i: usize) -> &SparseVec<Q> {
        &self.differential[i]
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(|v| v.is_empty())
    }

    pub fn mul(&self, x: &SparseVec<Q>, y: &SparseVec<Q>) -> SparseVec<Q> {
        let mut out = SparseVec::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(p) = self.product.get(&(*i, *j)) {
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

    pub fn unit_vector(&self) -> SparseVec<Q> {
        SparseVec::from([(self.unit, Q::one())])
    }

    /// Tensor product `A ⊗ B` with the Koszul sign rule; basis pairs are
    /// ordered lexicographically.
    pub fn tensor(&self, o: &GCAlgebra) -> GCAlgebra {
        let m = o.dim();
        let idx = |i: usize, j: usize| i * m + j;
        let basis: Vec<BasisElement> = self
            .basis
            .iter()
            .flat_map(|a| {
                o.basis.iter().map(move |b| BasisElement {
                    label: format!("{}⊗{}", a.label, b.label),
                    degree: a.degree + b.degree,
                    bitype: a.bitype.zip(b.bitype).map(|(x, y)| (x.0 + y.0, x.1 + y.1)),
                })
            })
            .collect();
        let mut products = Vec::new();
        for ((i1, i2), p) in &self.product {
            for ((j1, j2), r) in &o.product {
                // (a1⊗b1)(a2⊗b2) = (−1)^{|b1||a2|} a1a2 ⊗ b1b2
                let s = koszul(o.degree(*j1), self.degree(*i2));
                for (k1, c1) in p {
                    for (k2, c2) in r {
                        products.push((idx(*i1, *j1), idx(*i2, *j2), idx(*k1, *k2), c1.mul_ref(c2).mul_ref(&s)));
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
                let s = koszul(self.degree(i), 1);
                for (k, c) in &o.differential[j] {
                    differential.push((idx(i, j), idx(i, *k), c.mul_ref(&s)));
                }
            }
        }
        GCAlgebra::new(basis, idx(self.unit, o.unit), &products, &differential, false).expect("indices in range")
    }

    /// Cohomology algebra with zero differential, together with cocycle
    /// representatives (in the basis of `self`) for its basis.
    pub fn cohomology(&self) -> (GCAlgebra, Vec<SparseVec<Q>>) {
        let n = self.dim();
        let mut basis = Vec::new();
        let mut reps: Vec<SparseVec<Q>> = Vec::new();
        // Per degree: boundaries first, then a complement of them in cycles.
        let mut reducers: BTreeMap<u32, (SparseEchelon<Q>, usize)> = BTreeMap::new();
        for k in 0..=self.max_degree() {
            let idx = self.indices_of_degree(k);
            let mut ech = SparseEchelon::new(true);
            let mut nb = 0;
            if k > 0 {
                for i in self.indices_of_degree(k - 1) {
                    if ech.insert(self.d_basis(i)).is_some() {
                        nb += 1;
                    }
                }
            }
            let cycles = self.cycles_in(&idx);
            for z in cycles {
                if ech.insert(&z).is_some() {
                    let sub = self.bitype_of_vec(&z);
                    basis.push(BasisElement {
                        label: format!("[{}]", describe(&z, &self.basis)),
                        degree: k,
                        bitype: sub,
                    });
                    reps.push(z);
                }
            }
            reducers.insert(k, (ech, nb));
        }
        let unit_pos = reps.iter().position(|z| z == &self.unit_vector()).unwrap_or(0);
        // Coordinates of a cocycle of degree k in the cohomology basis.
        let offsets: BTreeMap<u32, usize> = {
            let mut m = BTreeMap::new();
            let mut acc = 0;
            for k in 0..=self.max_degree() {
                m.insert(k, acc);
                acc += basis.iter().filter(|b| b.degree == k).count();
            }
            m
        };
        let coords = |z: &SparseVec<Q>, k: u32| -> SparseVec<Q> {
            let (ech, nb) = &reducers[&k];
            let combo = ech.express(z).expect("cocycle");
            combo.into_iter().filter(|(g, _)| *g >= *nb).map(|(g, c)| (offsets[&k] + g - nb, c)).collect()
        };
        let mut products = Vec::new();
        for (a, za) in reps.iter().enumerate() {
            for (b, zb) in reps.iter().enumerate() {
                let k = basis[a].degree + basis[b].degree;
                if k > self.max_degree() {
                    continue;
                }
                let p = self.mul(za, zb);
                if is_zero_vec(&p) {
                    continue;
                }
                for (c, v) in coords(&p, k) {
                    products.push((a, b, c, v));
                }
            }
        }
        let _ = n;
        let h = GCAlgebra::new(basis, unit_pos, &products, &[], false).expect("indices in range");
        (h, reps)
    }

    fn bitype_of_vec(&self, z: &SparseVec<Q>) -> Option<(i64, i64)> {
        let mut it = z.keys().map(|&i| self.basis[i].bitype);
        let first = it.next()??;
        it.all(|b| b == Some(first)).then_some(first)
    }

    /// Basis of the cocycles spanned by the given basis indices, chosen
    /// homogeneous for the bitype when the algebra is bityped.
    fn cycles_in(&self, idx: &[usize]) -> Vec<SparseVec<Q>> {
        let mut groups: BTreeMap<Option<(i64, i64)>, Vec<usize>> = BTreeMap::new();
        for &i in idx {
            groups.entry(if self.is_bityped() { self.basis[i].bitype } else { None }).or_default().push(i);
        }
        let mut out = Vec::new();
        for (_, g) in groups {
            // Kernel of d restricted to span(g) via tracked echelon of images.
            let mut ech = SparseEchelon::new(true);
            let mut ids = Vec::new();
            for &i in &g {
                let img = self.d_basis(i);
                let (rem, combo) = ech.reduce(img);
                if rem.is_empty() {
                    let mut z = SparseVec::from([(i, Q::one())]);
                    for (gid, c) in combo {
                        let e = z.entry(ids[gid]).or_insert_with(Q::zero);
                        *e = e.sub_ref(&c);
                    }
                    // Independent generators are the earlier basis indices.
                    out.push(clean(z));
                } else {
                    ech.insert(img);
                    ids.push(i);
                }
            }
        }
        out
    }
}

fn describe(z: &SparseVec<Q>, basis: &[BasisElement]) -> String {
    if z.len() == 1 {
        let (i, c) = z.iter().next().unwrap();
        if c.is_one() {
            return basis[*i].label.clone();
        }
    }
    z.iter()
        .map(|(i, c)| format!("{}·{}", crate::scalars::q_to_string(c), basis[*i].label))
        .collect::<Vec<_>>()
        .join("+")
}

/// Outcome of [`validate_algebra`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Checks every structural law of a [`GCAlgebra`] and lists the violations.
pub fn validate_algebra(a: &GCAlgebra) -> AlgebraReport {
    let mut failures = Vec::new();
    let n = a.dim();
    let u = a.unit;
    if a.degree(u) != 0 {
        failures.push("unit is not in degree 0".into());
    }
    let deg0 = a.indices_of_degree(0).len();
    if deg0 != 1 {
        failures.push(format!("not connected: degree-0 part has dimension {deg0}"));
    }
    if !a.d_basis(u).is_empty() {
        failures.push("unit is not closed: d(1) ≠ 0".into());
    }
    for i in 0..n {
        let e = SparseVec::from([(i, Q::one())]);
        if a.mul(&a.unit_vector(), &e) != e || a.mul(&e, &a.unit_vector()) != e {
            failures.push(format!("unit law fails on {}", a.basis[i].label));
        }
        for k in a.d_basis(i).keys() {
            if a.degree(*k) != a.degree(i) + 1 {
                failures.push(format!("d({}) has a term of the wrong degree", a.basis[i].label));
            }
            if a.is_bityped() && a.bitype(*k) != a.bitype(i) {
                failures.push(format!("d({}) does not preserve bitype", a.basis[i].label));
            }
        }
        let dd = a.d(a.d_basis(i));
        if !is_zero_vec(&dd) {
            failures.push(format!("d² ≠ 0 on {}", a.basis[i].label));
        }
    }
    for ((i, j), p) in &a.product {
        for k in p.keys() {
            if a.degree(*k) != a.degree(*i) + a.degree(*j) {
                failures.push(format!("{}·{} has a term of the wrong degree", a.basis[*i].label, a.basis[*j].label));
            }
            if a.is_bityped() {
                let (x, y) = (a.bitype(*i).unwrap(), a.bitype(*j).unwrap());
                if a.bitype(*k) != Some((x.0 + y.0, x.1 + y.1)) {
                    failures.push(format!("{}·{} does not respect bitype", a.basis[*i].label, a.basis[*j].label));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = a.mul_basis(i, j);
            let ji = a.mul_basis(j, i);
            let s = koszul(a.degree(i), a.degree(j));
            let mut diff = ij.clone();
            sparse_axpy(&mut diff, &-s, &ji);
            if !is_zero_vec(&diff) && i <= j {
                failures.push(format!("graded commutativity fails for ({}, {})", a.basis[i].label, a.basis[j].label));
            }
            // Leibniz: d(ab) = da·b + (−1)^{|a|} a·db
            let ei = SparseVec::from([(i, Q::one())]);
            let ej = SparseVec::from([(j, Q::one())]);
            let mut lhs = a.d(&ij);
            sparse_axpy(&mut lhs, &-Q::one(), &a.mul(a.d_basis(i), &ej));
            let s = if a.degree(i) % 2 == 1 { q_int(1) } else { q_int(-1) };
            sparse_axpy(&mut lhs, &s, &a.mul(&ei, a.d_basis(j)));
            if !is_zero_vec(&lhs) {
                failures.push(format!("Leibniz rule fails for ({}, {})", a.basis[i].label, a.basis[j].label));
            }
            if ij.is_empty() {
                continue;
            }
            for k in 0..n {
                let ek = SparseVec::from([(k, Q::one())]);
                let mut assoc = a.mul(&ij, &ek);
                sparse_axpy(&mut assoc, &-Q::one(), &a.mul(&ei, &a.mul_basis(j, k)));
                if !is_zero_vec(&assoc) {
                    failures.push(format!(
                        "associativity fails for ({}, {}, {})",
                        a.basis[i].label, a.basis[j].label, a.basis[k].label
                    ));
                }
            }
        }
    }
    // Associativity when e_i e_j = 0 but (e_i)(e_j e_k) might not be.
    for i in 0..n {
        for j in 0..n {
            if !a.mul_basis(i, j).is_empty() {
                continue;
            }
            for k in 0..n {
                let ei = SparseVec::from([(i, Q::one())]);
                if !is_zero_vec(&a.mul(&ei, &a.mul_basis(j, k))) {
                    failures.push(format!(
                        "associativity fails for ({}, {}, {})",
                        a.basis[i].label, a.basis[j].label, a.basis[k].label
                    ));
                }
            }
        }
    }
    AlgebraReport { valid: failures.is_empty(), failures }
}

/// Standard cohomology rings and small model algebras.
pub mod fixtures {
    use super::*;

    /// `H*(Sⁿ)`; for even `n` the class is typed `(n/2, n/2)`.
    pub fn sphere(n: u32) -> GCAlgebra {
        let top = if n % 2 == 0 {
            BasisElement::typed("h", n as i64 / 2, n as i64 / 2)
        } else {
            BasisElement::new("h", n)
        };
        let unit = if n % 2 == 0 { BasisElement::typed("1", 0, 0) } else { BasisElement::new("1", 0) };
        GCAlgebra::new(vec![unit, top], 0, &[], &[], true).expect("valid")
    }

    /// `H*(ℙⁿ) = ℚ[e]/(e^{n+1})` with `e` of type (1,1).
    pub fn projective_space(n: u32) -> GCAlgebra {
        let basis: Vec<BasisElement> = (0..=n as i64)
            .map(|k| BasisElement::typed(&if k == 0 { "1".into() } else if k == 1 { "e".into() } else { format!("e^{k}") }, k, k))
            .collect();
        let mut products = Vec::new();
        for i in 1..=n as usize {
            for j in 1..=n as usize {
                if i + j <= n as usize {
                    products.push((i, j, i + j, Q::one()));
                }
            }
        }
        GCAlgebra::new(basis, 0, &products, &[], true).expect("valid")
    }

    /// Cohomology ring of a K3 surface: `b₂ = 22` with intersection form
    /// `3U ⊕ 2(−E₈)`. The first hyperbolic plane carries the classes of type
    /// (2,0) and (0,2); all other degree-2 classes have type (1,1).
    pub fn k3() -> GCAlgebra {
        let mut basis = vec![BasisElement::typed("1", 0, 0)];
        basis.push(BasisElement::typed("σ", 2, 0));
        basis.push(BasisElement::typed("σ̄", 0, 2));
        for k in 2..22 {
            basis.push(BasisElement::typed(&format!("h{k}"), 1, 1));
        }
        basis.push(BasisElement::typed("vol", 2, 2));
        let form = intersection_form_k3();
        let mut products = Vec::new();
        for i in 0..22 {
            for j in 0..22 {
                if form[i][j] != 0 {
                    products.push((i + 1, j + 1, 23, q_int(form[i][j])));
                }
            }
        }
        GCAlgebra::new(basis, 0, &products, &[], true).expect("valid")
    }

    /// The even unimodular form `3U ⊕ 2(−E₈)` of signature (3, 19).
    pub fn intersection_form_k3() -> Vec<Vec<i64>> {
        let mut f = vec![vec![0i64; 22]; 22];
        for b in 0..3 {
            f[2 * b][2 * b + 1] = 1;
            f[2 * b + 1][2 * b] = 1;
        }
        // Cartan matrix of E₈ (Bourbaki labelling), negated.
        let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
        for blk in 0..2 {
            let o = 6 + 8 * blk;
            for i in 0..8 {
                f[o + i][o + i] = -2;
            }
            for (a, b) in edges {
                f[o + a][o + b] = 1;
                f[o + b][o + a] = 1;
            }
        }
        f
    }

    /// `H*(E)` of an elliptic curve: exterior algebra on `a` of type (1,0)
    /// and `b` of type (0,1).
    pub fn elliptic() -> GCAlgebra {
        let basis = vec![
            BasisElement::typed("1", 0, 0),
            BasisElement::typed("a", 1, 0),
            BasisElement::typed("b", 0, 1),
            BasisElement::typed("ab", 1, 1),
        ];
        GCAlgebra::new(basis, 0, &[(1, 2, 3, Q::one())], &[], true).expect("valid")
    }

    /// Acyclic algebra `ℚ ⊕ ⟨u, du⟩` with `|u| = k` and all products of
    /// positive-degree elements zero.
    pub fn acyclic_pair(k: u32) -> GCAlgebra {
        let basis = vec![BasisElement::new("1", 0), BasisElement::new("u", k), BasisElement::new("du", k + 1)];
        GCAlgebra::new(basis, 0, &[], &[(1, 2, Q::one())], true).expect("valid")
    }

    /// Polynomial forms on the interval truncated at `s^{k+1} = 0`:
    /// basis `s^j` (degree 0) and `s^j ds` (degree 1, `j < k`) with
    /// `d(s^j) = j s^{j−1} ds`. Not connected.
    pub fn interval_forms(k: u32) -> GCAlgebra {
        let k = k as usize;
        let mut basis: Vec<BasisElement> = (0..=k).map(|j| BasisElement::new(&format!("s{j}"), 0)).collect();
        basis.extend((0..k).map(|j| BasisElement::new(&format!("s{j}ds"), 1)));
        let form = |j: usize| k + 1 + j;
        let mut products = Vec::new();
        for i in 0..=k {
            for j in 0..=k {
                if i + j <= k {
                    products.push((i, j, i + j, Q::one()));
                }
                if j < k && i + j < k {
                    products.push((i, form(j), form(i + j), Q::one()));
                    products.push((form(j), i, form(i + j), Q::one()));
                }
            }
        }
        let differential: Vec<(usize, usize, Q)> = (1..=k).map(|j| (j, form(j - 1), q_int(j as i64))).collect();
        GCAlgebra::new(basis, 0, &products, &differential, false).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn sphere_valid() {
        assert!(validate_algebra(&sphere(2)).valid);
        assert!(validate_algebra(&sphere(3)).valid);
    }

    #[test]
    fn unit_not_closed() {
        let b = vec![BasisElement::new("1", 0), BasisElement::new("h", 2)];
        let a = GCAlgebra::new(b, 0, &[], &[(0, 1, Q::one())], true).unwrap();
        let r = validate_algebra(&a);
        assert!(!r.valid);
        assert!(r.failures.iter().any(|f| f.contains("unit is not closed")));
    }

    #[test]
    fn k3_valid() {
        let a = k3();
        assert_eq!(a.dim(), 24);
        let r = validate_algebra(&a);
        assert!(r.valid, "{:?}", r.failures);
        // Unimodular of signature (3, 19).
        let f = intersection_form_k3();
        let m = crate::linalg::Matrix::from_fn(22, 22, |i, j| q_int(f[i][j]));
        assert_eq!(m.det(), q_int(-1));
    }

    #[test]
    fn fixtures_valid() {
        for a in [projective_space(2), projective_space(3), elliptic(), acyclic_pair(2)] {
            let r = validate_algebra(&a);
            assert!(r.valid, "{:?}", r.failures);
        }
        let t = sphere(2).tensor(&acyclic_pair(2)).tensor(&elliptic());
        let r = validate_algebra(&t);
        assert!(r.valid, "{:?}", r.failures);
        let r = validate_algebra(&interval_forms(3).tensor(&interval_forms(2)));
        assert_eq!(r.failures.len(), 1, "{:?}", r.failures);
        assert!(r.failures[0].contains("not connected"));
    }

    #[test]
    fn non_associative_detected() {
        let b = vec![BasisElement::new("1", 0), BasisElement::new("x", 2), BasisElement::new("y", 4), BasisElement::new("z", 6)];
        // x·x = y, x·y = 0 but y·x = 0 and nothing gives z: (xx)x = yx = 0 = x(xx); add x·y = z only.
        let a = GCAlgebra::new(b, 0, &[(1, 1, 2, Q::one()), (1, 2, 3, Q::one()), (2, 1, 3, q_int(2))], &[], true).unwrap();
        let r = validate_algebra(&a);
        assert!(!r.valid);
        assert!(r.failures.iter().any(|f| f.contains("commutativity")));
    }

    #[test]
    fn cohomology_of_tensor() {
        let t = sphere(2).tensor(&acyclic_pair(3));
        let (h, reps) = t.cohomology();
        assert_eq!(h.dim(), 2);
        assert_eq!(reps.len(), 2);
        assert!(validate_algebra(&h).valid);
        let (h, _) = projective_space(2).cohomology();
        assert_eq!(h.mul_basis(1, 1), SparseVec::from([(2, Q::one())]));
    }
}
