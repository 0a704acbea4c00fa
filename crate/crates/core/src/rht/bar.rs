use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::linalg::Matrix;
use crate::scalars::{q_frac, Field, Q};

use super::algebra::GCAlgebra;
use super::dgla::NilpotentDGLA;
use super::lie::{FreeLie, Key};
use super::tensor::Tensor;

/// Which additive grading the generators of the bar construction carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// Bitypes `(p, q)` of a bityped algebra.
    Hodge,
    /// Cohomological degrees, for algebras with zero differential.
    Weight,
    None,
}

pub fn grading_of(a: &GCAlgebra) -> Grading {
    if a.is_bityped() {
        Grading::Hodge
    } else if a.has_zero_differential() {
        Grading::Weight
    } else {
        Grading::None
    }
}

fn key_of(a: &GCAlgebra, i: usize, g: Grading) -> Key {
    match g {
        Grading::Hodge => a.bitype(i).expect("bityped"),
        Grading::Weight => (a.degree(i) as i64, 0),
        Grading::None => (0, 0),
    }
}

fn key_weight(k: Key, g: Grading) -> Option<i64> {
    match g {
        Grading::Hodge => Some(k.0 + k.1),
        Grading::Weight => Some(k.0),
        Grading::None => None,
    }
}

/// Cogenerator `σa^∨` of the bar construction, one per basis vector of the
/// augmentation ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarGenerator {
    pub label: String,
    /// Homological degree `|a| − 1`.
    pub degree: i64,
    /// Index of `a` in the basis of the algebra.
    pub source: usize,
    pub key: Key,
}

struct BlockHomology {
    /// Kernel of δ out of this block, in block coordinates.
    cycles: usize,
    boundaries: usize,
    reps: Vec<SparseVec<Q>>,
    echelon: SparseEchelon<Q>,
}

/// Dimension bookkeeping for one homological degree of the truncated complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCounts {
    pub degree: i64,
    pub dim: usize,
    pub cycles: usize,
    pub boundaries: usize,
    pub homology: usize,
}

/// The truncated bar construction of a connected algebra `A`: the free graded
/// Lie algebra on `σĀ^∨[1]` modulo brackets of length above the word-length
/// bound, restricted to homological degrees up to a degree bound, with the
/// differential dual to `d_A` and to the product.
///
/// Its graded dual, the cofree Lie coalgebra truncated at the same word
/// length, is recovered part by part with [`super::lie::colie_basis`].
pub struct FreeLieCoalgTrunc {
    generators: Vec<BarGenerator>,
    gen_images: Vec<Tensor>,
    lie: FreeLie,
    grading: Grading,
    delta: BTreeMap<(i64, Key), Vec<SparseVec<Q>>>,
    homology: BTreeMap<(i64, Key), BlockHomology>,
    algebra_dim: usize,
}

/// Bar construction truncated at word length `n`, in homological degrees up
/// to `n`.
pub fn bar_construction(a: &GCAlgebra, n: usize) -> Result<FreeLieCoalgTrunc> {
    bar_truncated(a, n, n as i64)
}

/// Bar construction truncated at word length `word_length` and homological
/// degree `max_degree`.
pub fn bar_truncated(a: &GCAlgebra, word_length: usize, max_degree: i64) -> Result<FreeLieCoalgTrunc> {
    let deg0 = a.indices_of_degree(0).len();
    if deg0 != 1 || a.degree(a.unit()) != 0 {
        return Err(Error::NotConnected(deg0));
    }
    if word_length == 0 {
        return Err(Error::Truncation("word length must be positive".into()));
    }
    let grading = grading_of(a);
    let ideal = a.augmentation_ideal();
    let pos: BTreeMap<usize, usize> = ideal.iter().enumerate().map(|(g, &i)| (i, g)).collect();
    let generators: Vec<BarGenerator> = ideal
        .iter()
        .map(|&i| BarGenerator {
            label: format!("σ{}", a.basis()[i].label),
            degree: a.degree(i) as i64 - 1,
            source: i,
            key: key_of(a, i, grading),
        })
        .collect();
    let degs: Vec<i64> = generators.iter().map(|g| g.degree).collect();
    let keys: Vec<Key> = generators.iter().map(|g| g.key).collect();
    // δ(σc) = −Σ_b ⟨c, d b⟩ σb + ½ Σ_{a,b} m_{ab}^c (−1)^{|a|} [σa, σb]
    let mut gen_images = vec![Tensor::zero(); generators.len()];
    for &b in &ideal {
        for (c, coef) in a.d_basis(b) {
            if let Some(&gc) = pos.get(c) {
                gen_images[gc].add_term(vec![pos[&b] as u16], -coef.clone());
            }
        }
    }
    let half = q_frac(1, 2);
    for ((x, y), p) in a.products() {
        let (Some(&gx), Some(&gy)) = (pos.get(x), pos.get(y)) else { continue };
        let sx = if a.degree(*x) % 2 == 1 { -half.clone() } else { half.clone() };
        let br = Tensor::generator(gx as u16).bracket(&Tensor::generator(gy as u16), &degs, Some(word_length));
        for (c, m) in p {
            if let Some(&gc) = pos.get(c) {
                gen_images[gc].add_scaled(&sx.mul_ref(m), &br);
            }
        }
    }
    let lie = FreeLie::new(degs, keys, word_length, max_degree);
    let mut bar = FreeLieCoalgTrunc {
        generators,
        gen_images,
        lie,
        grading,
        delta: BTreeMap::new(),
        homology: BTreeMap::new(),
        algebra_dim: a.dim(),
    };
    bar.build_differential()?;
    bar.build_homology();
    Ok(bar)
}

impl FreeLieCoalgTrunc {
    pub fn generators(&self) -> &[BarGenerator] {
        &self.generators
    }

    pub fn lie(&self) -> &FreeLie {
        &self.lie
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn word_length(&self) -> usize {
        self.lie.max_len()
    }

    pub fn max_degree(&self) -> i64 {
        self.lie.max_degree()
    }

    /// Differential of a Lie element, truncated at the word-length bound.
    pub fn differential(&self, t: &Tensor) -> Tensor {
        let imgs = &self.gen_images;
        t.derivation(self.lie.degs(), true, &|g| imgs[g as usize].clone(), Some(self.word_length()))
    }

    fn build_differential(&mut self) -> Result<()> {
        let mut delta = BTreeMap::new();
        for (&(n, key), block) in self.lie.blocks() {
            let mut cols = Vec::with_capacity(block.dim());
            for b in block.basis() {
                let img = self.differential(b);
                if !self.differential(&img).is_zero() {
                    return Err(Error::IdentityFailed("bar differential does not square to zero".into()));
                }
                if img.is_zero() {
                    cols.push(SparseVec::new());
                    continue;
                }
                let target = self.lie.block(n - 1, key).ok_or_else(|| {
                    Error::NotAChainMap("differential leaves the grading of the generators".into())
                })?;
                let c = target.coords(&img).ok_or_else(|| {
                    Error::NotAChainMap("differential leaves the grading of the generators".into())
                })?;
                cols.push(c);
            }
            delta.insert((n, key), cols);
        }
        self.delta = delta;
        Ok(())
    }

    fn build_homology(&mut self) {
        let top = self.max_degree();
        let mut out = BTreeMap::new();
        for (&(n, key), block) in self.lie.blocks() {
            if n >= top {
                continue;
            }
            // Kernel of δ on this block.
            let cols = &self.delta[&(n, key)];
            let mut img = SparseEchelon::new(true);
            let mut ids = Vec::new();
            let mut cycles = Vec::new();
            for (i, c) in cols.iter().enumerate() {
                let (rem, combo) = img.reduce(c);
                if rem.is_empty() {
                    let mut z = SparseVec::from([(i, Q::one())]);
                    for (g, v) in combo {
                        z.insert(ids[g], -v);
                    }
                    cycles.push(z);
                } else {
                    img.insert(c);
                    ids.push(i);
                }
            }
            let mut ech = SparseEchelon::new(true);
            let mut boundaries = 0;
            if let Some(incoming) = self.delta.get(&(n + 1, key)) {
                for v in incoming {
                    if ech.insert(v).is_some() {
                        boundaries += 1;
                    }
                }
            }
            let mut reps = Vec::new();
            for z in &cycles {
                if ech.insert(z).is_some() {
                    reps.push(z.clone());
                }
            }
            let _ = block;
            out.insert((n, key), BlockHomology { cycles: cycles.len(), boundaries, reps, echelon: ech });
        }
        self.homology = out;
    }

    /// Rank bookkeeping in homological degree `n`; `None` at or above the
    /// degree bound, where boundaries are not available.
    pub fn degree_counts(&self, n: i64) -> Option<DegreeCounts> {
        if n >= self.max_degree() {
            return None;
        }
        let mut c = DegreeCounts { degree: n, dim: self.lie.dim(n), cycles: 0, boundaries: 0, homology: 0 };
        for ((d, _), h) in &self.homology {
            if *d == n {
                c.cycles += h.cycles;
                c.boundaries += h.boundaries;
                c.homology += h.reps.len();
            }
        }
        Some(c)
    }

    /// Homology dimensions in degree `n` by grading label.
    pub fn homology_by_key(&self, n: i64) -> BTreeMap<Key, usize> {
        self.homology
            .iter()
            .filter(|((d, _), h)| *d == n && !h.reps.is_empty())
            .map(|((_, k), h)| (*k, h.reps.len()))
            .collect()
    }

    /// Cycle representatives of a homology basis in degree `n`, ordered by
    /// grading label.
    pub fn homology_basis(&self, n: i64) -> Vec<(Key, Tensor)> {
        let mut out = Vec::new();
        for ((d, k), h) in &self.homology {
            if *d == n {
                let block = self.lie.block(n, *k).expect("block");
                out.extend(h.reps.iter().map(|z| (*k, block.element(z))));
            }
        }
        out
    }

    /// Coordinates of the class of a cycle of degree `n` in
    /// [`Self::homology_basis`].
    pub fn classify(&self, n: i64, t: &Tensor) -> Result<Vec<Q>> {
        if n >= self.max_degree() {
            return Err(Error::Truncation(format!("homology in degree {n} needs a larger degree bound")));
        }
        if !self.differential(t).is_zero() {
            return Err(Error::Invalid("element is not a cycle".into()));
        }
        let mut out = Vec::new();
        let parts = self.lie.split(t);
        for ((d, k), h) in &self.homology {
            if *d != n {
                continue;
            }
            let mut v = vec![Q::zero(); h.reps.len()];
            if let Some(part) = parts.get(&(n, *k)) {
                let block = self.lie.block(n, *k).expect("block");
                let c = block.coords(part).ok_or_else(|| Error::Invalid("not a Lie element".into()))?;
                let combo = h.echelon.express(&c).expect("cycles lie in the span");
                for (g, x) in combo {
                    if g >= h.boundaries {
                        v[g - h.boundaries] = x;
                    }
                }
            }
            out.extend(v);
        }
        if parts.keys().any(|(d, k)| *d != n || !self.homology.contains_key(&(n, *k))) {
            return Err(Error::WrongDegree(format!("element is not homogeneous of degree {n}")));
        }
        Ok(out)
    }

    /// Lie element representing coordinates in the homology basis.
    pub fn represent(&self, n: i64, coords: &[Q]) -> Result<Tensor> {
        let basis = self.homology_basis(n);
        if basis.len() != coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "homology in degree {n} has dimension {}, got {} coordinates",
                basis.len(),
                coords.len()
            )));
        }
        let mut t = Tensor::zero();
        for ((_, b), c) in basis.iter().zip(coords) {
            t.add_scaled(c, b);
        }
        Ok(t)
    }

    /// Quotient of the truncated Lie algebra by `L_{>top} ⊕ δ(L_{top+1})`: a
    /// finite nilpotent DGLA with the same homology in degrees up to `top`,
    /// graded cohomologically (degree `−n` for homological degree `n`).
    pub fn to_dgla(&self, top: i64) -> Result<NilpotentDGLA> {
        if top + 1 > self.max_degree() {
            return Err(Error::Truncation(format!("degree bound {} too small for top {top}", self.max_degree())));
        }
        // Basis: full blocks below `top`, complements of boundaries at `top`.
        struct Slot {
            offset: usize,
            keep: Vec<usize>,
            quotient: Option<(SparseEchelon<Q>, usize, Vec<Option<usize>>)>,
        }
        let mut slots: BTreeMap<(i64, Key), Slot> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        let mut elements = Vec::new();
        for (&(n, key), block) in self.lie.blocks() {
            if n > top {
                continue;
            }
            let offset = labels.len();
            if n < top {
                for (i, b) in block.basis().iter().enumerate() {
                    labels.push(format!("L{n}.{}.{}.{i}", key.0, key.1));
                    degrees.push(-n);
                    elements.push(b.clone());
                }
                slots.insert((n, key), Slot { offset, keep: (0..block.dim()).collect(), quotient: None });
                continue;
            }
            let mut ech = SparseEchelon::new(true);
            let mut nb = 0;
            if let Some(incoming) = self.delta.get(&(n + 1, key)) {
                for v in incoming {
                    if ech.insert(v).is_some() {
                        nb += 1;
                    }
                }
            }
            let mut keep = Vec::new();
            let mut pos = Vec::new();
            for i in 0..block.dim() {
                if ech.insert(&SparseVec::from([(i, Q::one())])).is_some() {
                    pos.push(Some(keep.len()));
                    keep.push(i);
                } else {
                    pos.push(None);
                }
            }
            for (j, &i) in keep.iter().enumerate() {
                labels.push(format!("L{n}.{}.{}.{j}", key.0, key.1));
                degrees.push(-n);
                elements.push(block.basis()[i].clone());
            }
            slots.insert((n, key), Slot { offset, keep, quotient: Some((ech, nb, pos)) });
        }
        let coords = |t: &Tensor| -> SparseVec<Q> {
            let mut out = SparseVec::new();
            for ((n, k), part) in self.lie.split(t) {
                if n > top {
                    continue;
                }
                let Some(slot) = slots.get(&(n, k)) else { continue };
                let block = self.lie.block(n, k).expect("block");
                let c = block.coords(&part).expect("Lie element");
                match &slot.quotient {
                    None => {
                        for (i, v) in c {
                            out.insert(slot.offset + i, v);
                        }
                    }
                    Some((ech, nb, _)) => {
                        let combo = ech.express(&c).expect("spanning");
                        for (g, v) in combo {
                            if g >= *nb {
                                out.insert(slot.offset + g - nb, v);
                            }
                        }
                    }
                }
                let _ = &slot.keep;
            }
            out
        };
        let degs = self.lie.degs();
        let mut brackets = Vec::new();
        for i in 0..elements.len() {
            for j in 0..elements.len() {
                if -(degrees[i] + degrees[j]) > top {
                    continue;
                }
                let b = elements[i].bracket(&elements[j], degs, Some(self.word_length()));
                for (k, c) in coords(&b) {
                    brackets.push((i, j, k, c));
                }
            }
        }
        let mut differential = Vec::new();
        for (i, e) in elements.iter().enumerate() {
            for (k, c) in coords(&self.differential(e)) {
                differential.push((i, k, c));
            }
        }
        NilpotentDGLA::new(labels, degrees, &brackets, &differential)
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }
}

/// A class in `π_n ⊗ ℚ`, given by coordinates in the homology basis of the
/// bar complex in degree `n − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiClass {
    pub n: usize,
    #[serde(with = "crate::scalars::serde_q_vec")]
    pub coords: Vec<Q>,
}

/// Dimension and gradings of one rational homotopy group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiGroup {
    pub n: usize,
    pub dim: usize,
    /// Dimensions by weight (sum of cohomological degrees, or `p + q`).
    pub by_weight: BTreeMap<i64, usize>,
    /// Dimensions by `(p, q)` type; empty for algebras without bitypes.
    pub by_type: BTreeMap<String, usize>,
}

pub struct HomotopyGroups {
    pub groups: Vec<PiGroup>,
    pub word_length: usize,
    /// Whether the dimensions agree with the run at word length + 1.
    pub stable: bool,
    pub complex: FreeLieCoalgTrunc,
}

fn pi_groups(bar: &FreeLieCoalgTrunc, range: std::ops::RangeInclusive<usize>) -> Vec<PiGroup> {
    range
        .map(|n| {
            let by_key = bar.homology_by_key(n as i64 - 1);
            let mut by_weight = BTreeMap::new();
            let mut by_type = BTreeMap::new();
            for (k, d) in &by_key {
                if let Some(w) = key_weight(*k, bar.grading) {
                    *by_weight.entry(w).or_insert(0) += d;
                }
                if bar.grading == Grading::Hodge {
                    by_type.insert(format!("({},{})", k.0, k.1), *d);
                }
            }
            PiGroup { n, dim: by_key.values().sum(), by_weight, by_type }
        })
        .collect()
}

/// Rational homotopy groups `π_n` for `n ≤ n_max` as homology of the bar
/// construction.
///
/// For simply connected `A` the default word length is `n_max + 1`. When
/// `A¹ ≠ 0` a word-length bound `N` must be given, and only `π₁` is reported:
/// the quotient of the Malcev Lie algebra by its `(N+1)`-st lower central
/// term. Higher groups of the truncated complex are not homotopy invariants.
pub fn homotopy_groups(a: &GCAlgebra, n_max: usize, word_length: Option<usize>) -> Result<HomotopyGroups> {
    let h1 = a.indices_of_degree(1).len();
    if h1 != 0 && word_length.is_none() {
        return Err(Error::NotSimplyConnected(h1));
    }
    if n_max < 1 {
        return Err(Error::Truncation("n_max must be at least 1".into()));
    }
    let n = word_length.unwrap_or(n_max + 1);
    let range = if h1 == 0 { 2..=n_max } else { 1..=1 };
    let bar = bar_truncated(a, n, n_max.max(1) as i64)?;
    let next = bar_truncated(a, n + 1, n_max.max(1) as i64)?;
    let groups = pi_groups(&bar, range.clone());
    let stable = groups == pi_groups(&next, range);
    Ok(HomotopyGroups { groups, word_length: n, stable, complex: bar })
}

impl HomotopyGroups {
    pub fn group(&self, n: usize) -> Option<&PiGroup> {
        self.groups.iter().find(|g| g.n == n)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.group(n).map_or(0, |g| g.dim)
    }

    pub fn basis_class(&self, n: usize, i: usize) -> PiClass {
        let d = self.dim(n);
        PiClass { n, coords: (0..d).map(|j| if j == i { Q::one() } else { Q::zero() }).collect() }
    }

    /// Whitehead product `π_m ⊗ π_n → π_{m+n−1}`, computed as the bracket of
    /// cycle representatives in the bar construction.
    pub fn whitehead_bracket(&self, x: &PiClass, y: &PiClass) -> Result<PiClass> {
        let bar = &self.complex;
        let k = x.n + y.n - 1;
        if (k as i64) > bar.max_degree() {
            return Err(Error::Truncation(format!("π_{k} is beyond the computed range")));
        }
        let tx = bar.represent(x.n as i64 - 1, &x.coords).map_err(|_| Error::WrongDegree(format!("not a π_{} class", x.n)))?;
        let ty = bar.represent(y.n as i64 - 1, &y.coords).map_err(|_| Error::WrongDegree(format!("not a π_{} class", y.n)))?;
        let b = tx.bracket(&ty, bar.lie.degs(), Some(bar.word_length()));
        let coords = if b.is_zero() {
            vec![Q::zero(); bar.homology_basis(k as i64 - 1).len()]
        } else {
            bar.classify(k as i64 - 1, &b)?
        };
        Ok(PiClass { n: k, coords })
    }

    /// Hurewicz image in `(Aⁿ)^∨`: the word-length-one component of a cycle
    /// representative, as coefficients on the dual basis of the algebra.
    pub fn hurewicz(&self, x: &PiClass) -> Result<Vec<Q>> {
        let bar = &self.complex;
        let t = bar.represent(x.n as i64 - 1, &x.coords)?;
        let mut out = vec![Q::zero(); bar.algebra_dim()];
        for (w, c) in t.length_component(1).terms() {
            out[bar.generators[w[0] as usize].source] = c.clone();
        }
        Ok(out)
    }
}

/// `π₃` of a simply connected algebra from its cohomology:
/// `H³ ⊕ ker(Sym²H² → H⁴)` (dually), with gradings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi3Formula {
    pub h3: usize,
    pub sym2_kernel: usize,
    pub dim: usize,
    pub by_weight: BTreeMap<i64, usize>,
    pub by_type: BTreeMap<String, usize>,
}

pub fn pi3_formula(a: &GCAlgebra) -> Result<Pi3Formula> {
    let (h, _) = a.cohomology();
    let h1 = h.indices_of_degree(1).len();
    if h1 != 0 || a.indices_of_degree(0).len() != 1 {
        return Err(Error::NotSimplyConnected(h1));
    }
    let grading = grading_of(a);
    let key = |i: usize| -> Key {
        match grading {
            Grading::Hodge => h.bitype(i).unwrap_or((0, 0)),
            Grading::Weight => (h.degree(i) as i64, 0),
            Grading::None => (0, 0),
        }
    };
    let mut by_key: BTreeMap<Key, usize> = BTreeMap::new();
    let h3 = h.indices_of_degree(3);
    for &i in &h3 {
        *by_key.entry(key(i)).or_insert(0) += 1;
    }
    let h2 = h.indices_of_degree(2);
    let mut pairs: BTreeMap<Key, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, &i) in h2.iter().enumerate() {
        for &j in &h2[x..] {
            let (ki, kj) = (key(i), key(j));
            pairs.entry((ki.0 + kj.0, ki.1 + kj.1)).or_default().push((i, j));
        }
    }
    let h4 = h.indices_of_degree(4);
    let mut sym2_kernel = 0;
    for (k, ps) in pairs {
        let m = Matrix::from_fn(h4.len(), ps.len(), |r, c| {
            let (i, j) = ps[c];
            h.mul_basis(i, j).get(&h4[r]).cloned().unwrap_or_else(Q::zero)
        });
        let ker = ps.len() - if h4.is_empty() { 0 } else { m.rank() };
        if ker > 0 {
            *by_key.entry(k).or_insert(0) += ker;
        }
        sym2_kernel += ker;
    }
    let mut by_weight = BTreeMap::new();
    let mut by_type = BTreeMap::new();
    for (k, d) in &by_key {
        if let Some(w) = key_weight(*k, grading) {
            *by_weight.entry(w).or_insert(0) += d;
        }
        if grading == Grading::Hodge {
            by_type.insert(format!("({},{})", k.0, k.1), *d);
        }
    }
    Ok(Pi3Formula { h3: h3.len(), sym2_kernel, dim: h3.len() + sym2_kernel, by_weight, by_type })
}
