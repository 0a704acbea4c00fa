use super::dense::Matrix;
use crate::scalars::{Field, Gauss, Q};

/// Subspace of `F^n`, stored through the canonical reduced echelon basis so that
/// equal subspaces have identical representations.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit(ambient, i)).collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.to_vec(), ambient);
        let r = m.rref();
        let basis = (0..r.pivots.len()).map(|i| r.matrix.row(i).to_vec()).collect();
        Subspace { ambient, basis, pivots: r.pivots }
    }

    /// Span of the columns of a matrix.
    pub fn column_span(m: &Matrix<F>) -> Self {
        let cols: Vec<Vec<F>> = (0..m.cols()).map(|j| m.col(j)).collect();
        Subspace::span(m.rows(), &cols)
    }

    /// Span of the coordinate vectors with the given indices.
    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        let v: Vec<Vec<F>> = idx.iter().map(|&i| unit(ambient, i)).collect();
        Subspace::span(ambient, &v)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as the columns of an `ambient × dim` matrix.
    pub fn matrix(&self) -> Matrix<F> {
        Matrix::from_cols(&self.basis, self.ambient)
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let c: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (r, bj) in rest.iter_mut().zip(b) {
                if !bj.is_zero() {
                    *r = r.sub_ref(&ci.mul_ref(bj));
                }
            }
        }
        rest.iter().all(|a| a.is_zero()).then_some(c)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, o: &Self) -> bool {
        self.basis.iter().all(|b| o.contains(b))
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient, &v)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let m = self.matrix().hstack(&(-o.matrix()));
        let k = self.dim();
        let vecs: Vec<Vec<F>> = m
            .kernel()
            .into_iter()
            .map(|c| {
                let mut v = vec![F::zero(); self.ambient];
                for (ci, b) in c[..k].iter().zip(&self.basis) {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj = vj.add_ref(&ci.mul_ref(bj));
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Image under a linear map `F^ambient → F^rows`.
    pub fn image(&self, m: &Matrix<F>) -> Self {
        let v: Vec<Vec<F>> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Subspace::span(m.rows(), &v)
    }

    /// Preimage under a linear map `m: F^cols → F^ambient`.
    pub fn preimage(&self, m: &Matrix<F>) -> Self {
        // x with m x ∈ self  ⇔  (m x, y) in the kernel of [m | −B]
        let b = self.matrix();
        let big = m.hstack(&(-b));
        let vecs: Vec<Vec<F>> = big.kernel().into_iter().map(|c| c[..m.cols()].to_vec()).collect();
        Subspace::span(m.cols(), &vecs)
    }

    /// Annihilator in the dual space, using the standard pairing.
    pub fn annihilator(&self) -> Self {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        let m = Matrix::from_rows(self.basis.clone(), self.ambient);
        Subspace::span(self.ambient, &m.kernel())
    }

    /// A complement spanned by standard basis vectors outside the pivots.
    pub fn coordinate_complement(&self) -> Self {
        let idx: Vec<usize> = (0..self.ambient).filter(|i| !self.pivots.contains(i)).collect();
        Subspace::coordinate(self.ambient, &idx)
    }

    /// Extends a basis of `sub ⊆ self` to a basis of `self`, returning the added
    /// vectors (a complement of `sub` inside `self`).
    pub fn complement_in(&self, sub: &Self) -> Vec<Vec<F>> {
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for b in &self.basis {
            if !acc.contains(b) {
                out.push(b.clone());
                acc = acc.sum(&Subspace::span(self.ambient, &[b.clone()]));
            }
        }
        out
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> Subspace<G> {
        let v: Vec<Vec<G>> = self.basis.iter().map(|b| b.iter().map(&f).collect()).collect();
        Subspace::span(self.ambient, &v)
    }
}

impl Subspace<Q> {
    pub fn complexify(&self) -> Subspace<Gauss> {
        self.map_field(|a| Gauss::real(a.clone()))
    }
}

impl Subspace<Gauss> {
    pub fn conj(&self) -> Self {
        self.map_field(|a| a.conj())
    }

    /// `V ∩ self` for the standard real structure: the rational vectors in the
    /// subspace.
    pub fn real_points(&self) -> Subspace<Q> {
        // w = a + ib ∈ self with a real ⇔ a ∈ self ∩ conj(self); real points of
        // a conjugation-stable space are spanned by real and imaginary parts.
        let stable = self.intersect(&self.conj());
        let mut v: Vec<Vec<Q>> = Vec::new();
        for b in stable.basis() {
            v.push(b.iter().map(|a| a.re.clone()).collect());
            v.push(b.iter().map(|a| a.im.clone()).collect());
        }
        Subspace::span(self.ambient, &v)
    }
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::q_int;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&a| q_int(a)).collect()
    }

    #[test]
    fn canonical_representation() {
        let a = Subspace::span(3, &[qv(&[1, 1, 0]), qv(&[0, 1, 1])]);
        let b = Subspace::span(3, &[qv(&[1, 2, 1]), qv(&[1, 0, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn intersections_and_sums() {
        let a = Subspace::span(3, &[qv(&[1, 0, 0]), qv(&[0, 1, 0])]);
        let b = Subspace::span(3, &[qv(&[0, 1, 0]), qv(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span(3, &[qv(&[0, 1, 0])]));
        assert!(a.sum(&b).is_full());
        assert_eq!(a.annihilator(), Subspace::span(3, &[qv(&[0, 0, 1])]));
    }

    #[test]
    fn preimage_of_line() {
        let m = Matrix::from_rows(vec![qv(&[1, 1]), qv(&[0, 0])], 2);
        let line = Subspace::span(2, &[qv(&[0, 1])]);
        assert_eq!(line.preimage(&m), Subspace::span(2, &[qv(&[1, -1])]));
    }

    #[test]
    fn real_points_of_complex_line() {
        let i = Gauss::i();
        let one = Gauss::one();
        let l = Subspace::span(2, &[vec![one.clone(), i.clone()]]);
        assert!(l.real_points().is_zero());
        let plane = l.sum(&l.conj());
        assert!(plane.real_points().is_full());
    }
}
