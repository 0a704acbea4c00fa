use std::collections::{BTreeMap, HashMap};

use crate::scalars::Field;

/// Sparse vector indexed by `usize`; zero entries are never stored.
pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn sparse_axpy<F: Field>(y: &mut SparseVec<F>, a: &F, x: &SparseVec<F>) {
    if a.is_zero() {
        return;
    }
    for (k, xv) in x {
        let t = a.mul_ref(xv);
        match y.get_mut(k) {
            Some(yv) => {
                *yv = yv.add_ref(&t);
                if yv.is_zero() {
                    y.remove(k);
                }
            }
            None => {
                y.insert(*k, t);
            }
        }
    }
}

struct Row<F> {
    vec: SparseVec<F>,
    combo: SparseVec<F>,
}

/// Incrementally built echelon basis of a subspace of a sparse vector space.
///
/// Each stored row has a distinct leading index with coefficient one and remembers how it was
/// obtained from the inserted generators, so membership tests also return
/// coordinates in terms of the independent generators.
pub struct SparseEchelon<F> {
    rows: Vec<Row<F>>,
    by_pivot: HashMap<usize, usize>,
    generators: usize,
    track: bool,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(track_combinations: bool) -> Self {
        SparseEchelon { rows: Vec::new(), by_pivot: HashMap::new(), generators: 0, track: track_combinations }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the remainder and the combination
    /// of independent generators that was subtracted.
    pub fn reduce(&self, v: &SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = rem
                .range(cursor..)
                .find(|(k, _)| self.by_pivot.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let row = &self.rows[self.by_pivot[&k]];
            let f = c;
            sparse_axpy(&mut rem, &(-f.clone()), &row.vec);
            if self.track {
                sparse_axpy(&mut combo, &f, &row.combo);
            }
            cursor = k + 1;
        }
        (rem, combo)
    }

    /// Inserts `v`; returns its generator index when it is independent of the
    /// vectors inserted so far.
    pub fn insert(&mut self, v: &SparseVec<F>) -> Option<usize> {
        let (rem, combo) = self.reduce(v);
        let (&pivot, lead) = rem.iter().next()?;
        let scale = lead.inv().expect("nonzero pivot");
        let id = self.generators;
        self.generators += 1;
        let combo = if self.track {
            let mut c: SparseVec<F> = combo.into_iter().map(|(k, a)| (k, -a.mul_ref(&scale))).collect();
            c.insert(id, scale.clone());
            c
        } else {
            SparseVec::new()
        };
        let rem: SparseVec<F> = rem.iter().map(|(k, a)| (*k, a.mul_ref(&scale))).collect();
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(Row { vec: rem, combo });
        Some(id)
    }

    /// Coordinates of `v` in terms of the independent generators, or `None`
    /// if `v` is not in their span.
    pub fn express(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        assert!(self.track, "combination tracking disabled");
        let (rem, combo) = self.reduce(v);
        rem.is_empty().then_some(combo)
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Treats the stored rows as an augmented system `[A | b]` with `b` in
    /// column `n` and returns the solution with free unknowns set to zero, or
    /// `None` if the system is inconsistent.
    pub fn basic_solution(&self, n: usize) -> Option<Vec<F>> {
        if self.by_pivot.contains_key(&n) {
            return None;
        }
        let mut pivots: Vec<(usize, usize)> = self.by_pivot.iter().map(|(&p, &r)| (p, r)).collect();
        pivots.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut x = vec![F::zero(); n];
        for (p, r) in pivots {
            let mut v = F::zero();
            for (&j, a) in self.rows[r].vec.range(p + 1..) {
                if j == n {
                    v = v.add_ref(a);
                } else if !x[j].is_zero() {
                    v = v.sub_ref(&a.mul_ref(&x[j]));
                }
            }
            x[p] = v;
        }
        Some(x)
    }
}

/// Rank of a family of sparse vectors.
pub fn sparse_rank<F: Field>(vectors: &[SparseVec<F>]) -> usize {
    let mut e = SparseEchelon::new(false);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{q_int, Q};

    fn sv(entries: &[(usize, i64)]) -> SparseVec<Q> {
        entries.iter().map(|&(k, a)| (k, q_int(a))).collect()
    }

    #[test]
    fn insert_and_express() {
        let mut e = SparseEchelon::new(true);
        assert_eq!(e.insert(&sv(&[(0, 1), (3, 2)])), Some(0));
        assert_eq!(e.insert(&sv(&[(0, 1), (5, 1)])), Some(1));
        assert_eq!(e.insert(&sv(&[(3, 2), (5, -1)])), None);
        let target = sv(&[(0, 2), (3, 2), (5, 1)]);
        let c = e.express(&target).unwrap();
        assert_eq!(c, sv(&[(0, 1), (1, 1)]));
        assert!(e.express(&sv(&[(7, 1)])).is_none());
        assert_eq!(sparse_rank(&[sv(&[(1, 1)]), sv(&[(1, 2)]), sv(&[(2, 1)])]), 2);
    }
}
