use std::collections::{BTreeMap, HashMap};

use crate::linalg::{SparseEchelon, SparseVec};
use crate::scalars::{Field, Q};

use super::tensor::{word_degree, Tensor, Word};

/// Additive grading label carried by generators: a (p, q) bitype, or
/// `(weight, 0)` when only a weight is available.
pub type Key = (i64, i64);

pub fn word_key(w: &[u16], keys: &[Key]) -> Key {
    w.iter().fold((0, 0), |acc, &g| (acc.0 + keys[g as usize].0, acc.1 + keys[g as usize].1))
}

/// Lie elements of one homological degree and grading label, stored as
/// tensors together with an echelon form over their words.
pub struct LieBlock {
    basis: Vec<Tensor>,
    lengths: Vec<usize>,
    words: HashMap<Word, usize>,
    echelon: SparseEchelon<Q>,
}

impl LieBlock {
    fn new() -> Self {
        LieBlock { basis: Vec::new(), lengths: Vec::new(), words: HashMap::new(), echelon: SparseEchelon::new(true) }
    }

    fn index_words(&mut self, t: &Tensor) -> SparseVec<Q> {
        let mut v = SparseVec::new();
        for (w, c) in t.terms() {
            let next = self.words.len();
            let i = *self.words.entry(w.clone()).or_insert(next);
            v.insert(i, c.clone());
        }
        v
    }

    fn push(&mut self, t: Tensor, len: usize) -> bool {
        let v = self.index_words(&t);
        if self.echelon.insert(&v).is_some() {
            self.basis.push(t);
            self.lengths.push(len);
            true
        } else {
            false
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Tensor] {
        &self.basis
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Coordinates of a Lie element of this block in its basis; `None` when
    /// the tensor is not in the span.
    pub fn coords(&self, t: &Tensor) -> Option<SparseVec<Q>> {
        let mut v = SparseVec::new();
        for (w, c) in t.terms() {
            v.insert(*self.words.get(w)?, c.clone());
        }
        self.echelon.express(&v)
    }

    pub fn element(&self, coords: &SparseVec<Q>) -> Tensor {
        let mut t = Tensor::zero();
        for (i, c) in coords {
            t.add_scaled(c, &self.basis[*i]);
        }
        t
    }
}

/// Truncation of the free graded Lie algebra on homogeneous generators,
/// realized inside the tensor algebra, bounded by word length and
/// homological degree.
pub struct FreeLie {
    degs: Vec<i64>,
    keys: Vec<Key>,
    max_len: usize,
    max_degree: i64,
    blocks: BTreeMap<(i64, Key), LieBlock>,
}

impl FreeLie {
    /// Builds a basis of every block from left-normed brackets `[g, x]`.
    pub fn new(degs: Vec<i64>, keys: Vec<Key>, max_len: usize, max_degree: i64) -> Self {
        assert_eq!(degs.len(), keys.len());
        let mut blocks: BTreeMap<(i64, Key), LieBlock> = BTreeMap::new();
        for g in 0..degs.len() {
            if degs[g] <= max_degree && max_len >= 1 {
                blocks.entry((degs[g], keys[g])).or_insert_with(LieBlock::new).push(Tensor::generator(g as u16), 1);
            }
        }
        for len in 2..=max_len {
            let prev: Vec<((i64, Key), Tensor)> = blocks
                .iter()
                .flat_map(|(k, b)| {
                    b.basis.iter().zip(&b.lengths).filter(|(_, l)| **l == len - 1).map(move |(t, _)| (*k, t.clone()))
                })
                .collect();
            for g in 0..degs.len() {
                let gt = Tensor::generator(g as u16);
                for ((n, key), x) in &prev {
                    let deg = n + degs[g];
                    if deg > max_degree {
                        continue;
                    }
                    let br = gt.bracket(x, &degs, None);
                    if br.is_zero() {
                        continue;
                    }
                    let k = (key.0 + keys[g].0, key.1 + keys[g].1);
                    blocks.entry((deg, k)).or_insert_with(LieBlock::new).push(br, len);
                }
            }
        }
        blocks.retain(|_, b| b.dim() > 0);
        FreeLie { degs, keys, max_len, max_degree, blocks }
    }

    pub fn degs(&self) -> &[i64] {
        &self.degs
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn blocks(&self) -> &BTreeMap<(i64, Key), LieBlock> {
        &self.blocks
    }

    pub fn block(&self, n: i64, key: Key) -> Option<&LieBlock> {
        self.blocks.get(&(n, key))
    }

    pub fn dim(&self, n: i64) -> usize {
        self.blocks.iter().filter(|((d, _), _)| *d == n).map(|(_, b)| b.dim()).sum()
    }

    /// Dimensions indexed by (degree, word length).
    pub fn dims_by_length(&self) -> BTreeMap<(i64, usize), usize> {
        let mut out = BTreeMap::new();
        for ((n, _), b) in &self.blocks {
            for l in &b.lengths {
                *out.entry((*n, *l)).or_insert(0) += 1;
            }
        }
        out
    }

    /// Splits a tensor into its (degree, label) components.
    pub fn split(&self, t: &Tensor) -> BTreeMap<(i64, Key), Tensor> {
        let mut out: BTreeMap<(i64, Key), Tensor> = BTreeMap::new();
        for (w, c) in t.terms() {
            out.entry((word_degree(w, &self.degs), word_key(w, &self.keys))).or_default().add_term(w.clone(), c.clone());
        }
        out
    }
}

/// Basis of the shuffle quotient `CoLie^n(W) = W^{⊗n} / sh` of the tensor
/// power of a graded space `W` (given by the degrees of its basis), with
/// Koszul signs.
#[derive(Clone)]
pub struct CoLieBasis {
    pub degrees: Vec<i64>,
    pub n: usize,
    /// Word representatives of the quotient basis.
    pub words: Vec<Word>,
    /// Rank of the shuffle relations.
    pub relation_rank: usize,
    index: HashMap<Word, usize>,
    relations: std::sync::Arc<SparseEchelon<Q>>,
}

impl CoLieBasis {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Image of a word under the quotient map, in the basis `self.words`.
    pub fn project(&self, w: &[u16]) -> SparseVec<Q> {
        let k = self.degrees.len();
        let (rem, _) = self.relations.reduce(&SparseVec::from([(word_index(w, k), Q::one())]));
        rem.into_iter().map(|(i, c)| (self.index[&index_word(i, k, self.n)], c)).collect()
    }
}

fn word_index(w: &[u16], k: usize) -> usize {
    w.iter().fold(0, |acc, &g| acc * k + g as usize)
}

fn index_word(mut i: usize, k: usize, n: usize) -> Word {
    let mut w = vec![0u16; n];
    for slot in w.iter_mut().rev() {
        *slot = (i % k) as u16;
        i /= k;
    }
    w
}

/// Signed shuffles of `a` and `b`: every interleaving with its Koszul sign.
fn shuffles(a: &[u16], b: &[u16], degs: &[i64]) -> Vec<(Word, bool)> {
    if a.is_empty() {
        return vec![(b.to_vec(), false)];
    }
    if b.is_empty() {
        return vec![(a.to_vec(), false)];
    }
    let mut out = Vec::new();
    for (mut w, s) in shuffles(&a[1..], b, degs) {
        w.insert(0, a[0]);
        out.push((w, s));
    }
    // b[0] moves past all of `a`.
    let da: i64 = a.iter().map(|&g| degs[g as usize]).sum();
    let flip = (da * degs[b[0] as usize]) % 2 != 0;
    for (mut w, s) in shuffles(a, &b[1..], degs) {
        w.insert(0, b[0]);
        out.push((w, s ^ flip));
    }
    out
}

/// Basis of `CoLie^n` on generators of the given degrees, by exact rank of
/// the shuffle relations `sh_{p,n−p}` for `0 < p < n`.
pub fn colie_basis(degrees: &[i64], n: usize) -> CoLieBasis {
    assert!(n >= 1, "tensor power must be positive");
    let k = degrees.len();
    let total = k.pow(n as u32);
    let mut ech = SparseEchelon::new(false);
    if k > 0 {
        for i in 0..total {
            let w = index_word(i, k, n);
            for p in 1..n {
                let mut rel: SparseVec<Q> = SparseVec::new();
                for (s, neg) in shuffles(&w[..p], &w[p..], degrees) {
                    let e = rel.entry(word_index(&s, k)).or_insert_with(Q::zero);
                    *e = if neg { e.sub_ref(&Q::one()) } else { e.add_ref(&Q::one()) };
                }
                rel.retain(|_, c| !c.is_zero());
                ech.insert(&rel);
            }
        }
    }
    let mut words = Vec::new();
    let mut index = HashMap::new();
    if k > 0 {
        for i in 0..total {
            let e = SparseVec::from([(i, Q::one())]);
            let (rem, _) = ech.reduce(&e);
            if rem.len() == 1 && rem.contains_key(&i) {
                let w = index_word(i, k, n);
                index.insert(w.clone(), words.len());
                words.push(w);
            }
        }
    }
    CoLieBasis {
        degrees: degrees.to_vec(),
        n,
        relation_rank: ech.rank(),
        words,
        index,
        relations: std::sync::Arc::new(ech),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_counts() {
        assert_eq!(colie_basis(&[0, 0], 2).dim(), 1);
        assert_eq!(colie_basis(&[0, 0], 3).dim(), 2);
        assert_eq!(colie_basis(&[0, 0], 4).dim(), 3);
        assert_eq!(colie_basis(&[0, 0, 0], 3).dim(), 8);
    }

    #[test]
    fn divided_square() {
        // One odd generator: the square survives, the cube does not.
        assert_eq!(colie_basis(&[1], 2).dim(), 1);
        assert_eq!(colie_basis(&[1], 3).dim(), 0);
        assert_eq!(colie_basis(&[2], 2).dim(), 0);
    }

    #[test]
    fn colie_dual_to_free_lie() {
        for degs in [vec![0, 0], vec![1, 1], vec![1, 2], vec![1, 2, 3], vec![0, 1]] {
            let keys: Vec<Key> = (0..degs.len()).map(|i| (1 << (4 * i), 0)).collect();
            let lie = FreeLie::new(degs.clone(), keys, 4, 100);
            let by_len = lie.dims_by_length();
            for n in 1..=4 {
                let lie_dim: usize = by_len.iter().filter(|((_, l), _)| *l == n).map(|(_, d)| d).sum();
                assert_eq!(colie_basis(&degs, n).dim(), lie_dim, "degrees {degs:?}, n = {n}");
            }
        }
    }

    #[test]
    fn projection_kills_shuffles() {
        let b = colie_basis(&[0, 0], 2);
        let mut s = b.project(&[0, 1]);
        for (i, c) in b.project(&[1, 0]) {
            let e = s.entry(i).or_insert_with(Q::zero);
            *e = e.add_ref(&c);
        }
        s.retain(|_, c| !c.is_zero());
        assert!(s.is_empty());
    }
}
