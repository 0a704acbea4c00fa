//! Finite-dimensional rational spaces, decreasing filtrations on their
//! complexifications, Rees data, purity and weak-Hodge cohomology.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Field, Gauss, Q};

/// A rational vector space with labelled basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalSpace {
    labels: Vec<String>,
}

impl RationalSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        if !labels.iter().all(|l| seen.insert(l.clone())) {
            return Err(Error::BadLabels);
        }
        Ok(RationalSpace { labels })
    }

    /// Space of dimension `dim` with labels `e0, e1, ...`.
    pub fn standard(dim: usize) -> Self {
        RationalSpace { labels: (0..dim).map(|i| format!("e{i}")).collect() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Antilinear involution `v ↦ C·v̄` on `V ⊗ ℂ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealStructure {
    matrix: Matrix<Gauss>,
}

impl RealStructure {
    /// Coordinatewise conjugation, the real structure of a rational space.
    pub fn standard(dim: usize) -> Self {
        RealStructure { matrix: Matrix::identity(dim) }
    }

    pub fn new(matrix: Matrix<Gauss>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("real structure must be square".into()));
        }
        if matrix.mul_ref(&matrix.conj()) != Matrix::identity(matrix.rows()) {
            return Err(Error::BadRealStructure);
        }
        Ok(RealStructure { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<Gauss> {
        &self.matrix
    }

    pub fn apply(&self, v: &[Gauss]) -> Vec<Gauss> {
        let c: Vec<Gauss> = v.iter().map(|a| a.conj()).collect();
        self.matrix.mul_vec(&c)
    }

    pub fn apply_subspace(&self, s: &Subspace<Gauss>) -> Subspace<Gauss> {
        let v: Vec<Vec<Gauss>> = s.basis().iter().map(|b| self.apply(b)).collect();
        Subspace::span(s.ambient(), &v)
    }
}

/// Exhaustive, separated decreasing filtration of `ℂ^dim`.
///
/// `levels[k]` is `F^{p_min + k}`; below `p_min` the filtration is the whole
/// space and above the last stored level it is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    dim: usize,
    p_min: i64,
    levels: Vec<Subspace<Gauss>>,
}

impl Filtration {
    /// Builds a filtration from listed steps `(p, F^p)`. An unlisted index takes
    /// the value of the next listed step above it.
    pub fn from_steps(dim: usize, steps: Vec<(i64, Subspace<Gauss>)>) -> Result<Self> {
        let steps: BTreeMap<i64, Subspace<Gauss>> = steps.into_iter().collect();
        if steps.values().any(|s| s.ambient() != dim) {
            return Err(Error::DimensionMismatch("filtration step ambient".into()));
        }
        let Some((&p_min, first)) = steps.iter().next() else {
            return Ok(Filtration::trivial(dim, 0));
        };
        if !first.is_full() {
            return Err(Error::NonExhaustive(p_min));
        }
        let mut prev: Option<&Subspace<Gauss>> = None;
        for (p, s) in &steps {
            if let Some(pr) = prev {
                if !s.is_subspace_of(pr) {
                    return Err(Error::NonDecreasing(*p));
                }
            }
            prev = Some(s);
        }
        let p_last = *steps.keys().next_back().expect("nonempty");
        let mut levels = Vec::new();
        for p in p_min..=p_last {
            let s = steps.range(p..).next().map(|(_, s)| s.clone()).expect("bounded");
            levels.push(s);
        }
        while levels.last().is_some_and(|s| s.is_zero()) {
            levels.pop();
        }
        Ok(Filtration { dim, p_min, levels })
    }

    /// One-step filtration `F^p = V` for `p ≤ p0`, zero above.
    pub fn trivial(dim: usize, p0: i64) -> Self {
        let levels = if dim == 0 { Vec::new() } else { vec![Subspace::full(dim)] };
        Filtration { dim, p_min: p0, levels }
    }

    /// Filtration with `F^p` spanned by the basis vectors whose level is `≥ p`.
    pub fn from_levels(levels_of_basis: &[i64]) -> Self {
        let dim = levels_of_basis.len();
        let Some(&lo) = levels_of_basis.iter().min() else {
            return Filtration::trivial(0, 0);
        };
        let hi = *levels_of_basis.iter().max().expect("nonempty");
        let steps = (lo..=hi)
            .map(|p| {
                let idx: Vec<usize> = (0..dim).filter(|&i| levels_of_basis[i] >= p).collect();
                (p, Subspace::coordinate(dim, &idx))
            })
            .collect();
        Filtration::from_steps(dim, steps).expect("coordinate flags are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lowest index of the stored window.
    pub fn p_min(&self) -> i64 {
        self.p_min
    }

    /// Highest index with `F^p ≠ 0`, or `p_min − 1` for the zero space.
    pub fn p_max(&self) -> i64 {
        self.p_min + self.levels.len() as i64 - 1
    }

    pub fn at(&self, p: i64) -> Subspace<Gauss> {
        if p < self.p_min {
            return Subspace::full(self.dim);
        }
        let k = (p - self.p_min) as usize;
        self.levels.get(k).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn gr_dim(&self, p: i64) -> usize {
        self.at(p).dim() - self.at(p + 1).dim()
    }

    /// Indices `p` with `gr^p ≠ 0` together with `dim gr^p`.
    pub fn jumps(&self) -> BTreeMap<i64, usize> {
        (self.p_min..=self.p_max())
            .filter_map(|p| {
                let g = self.gr_dim(p);
                (g > 0).then_some((p, g))
            })
            .collect()
    }

    /// Steps as `(p, F^p)` over the stored window.
    pub fn steps(&self) -> Vec<(i64, Subspace<Gauss>)> {
        (self.p_min..=self.p_max()).map(|p| (p, self.at(p))).collect()
    }

    /// Reindexing `F'^p = F^{p+n}`.
    pub fn shift(&self, n: i64) -> Self {
        Filtration { dim: self.dim, p_min: self.p_min - n, levels: self.levels.clone() }
    }

    /// Image under an invertible change of coordinates.
    pub fn transform(&self, m: &Matrix<Gauss>) -> Self {
        Filtration {
            dim: self.dim,
            p_min: self.p_min,
            levels: self.levels.iter().map(|s| s.image(m)).collect(),
        }
    }

    /// Induced filtration on a subquotient, given the coordinate map `q`
    /// defined on `sub`: `F^p ↦ q(F^p ∩ sub)`.
    pub fn induced(&self, sub: &Subspace<Gauss>, q: &Matrix<Gauss>) -> Self {
        let steps = (self.p_min..=self.p_max() + 1)
            .map(|p| (p, self.at(p).intersect(sub).image(q)))
            .collect();
        Filtration::from_steps(q.rows(), steps).expect("induced filtration is valid")
    }

    /// Direct sum with another filtration.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let lo = self.p_min.min(o.p_min);
        let hi = self.p_max().max(o.p_max()) + 1;
        let n = self.dim + o.dim;
        let steps = (lo..=hi)
            .map(|p| {
                let mut v: Vec<Vec<Gauss>> = Vec::new();
                for b in self.at(p).basis() {
                    let mut w = b.clone();
                    w.resize(n, Gauss::zero());
                    v.push(w);
                }
                for b in o.at(p).basis() {
                    let mut w = vec![Gauss::zero(); self.dim];
                    w.extend(b.iter().cloned());
                    v.push(w);
                }
                (p, Subspace::span(n, &v))
            })
            .collect();
        Filtration::from_steps(n, steps).expect("sum of valid filtrations")
    }
}

/// Generator-degree multiset of the Rees module: each `p` repeated `dim gr^p` times.
pub fn rees_jumps(v: &RationalSpace, f: &Filtration) -> Result<Vec<i64>> {
    if v.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!("space {} vs filtration {}", v.dim(), f.dim())));
    }
    Ok(f.jumps().into_iter().flat_map(|(p, m)| std::iter::repeat_n(p, m)).collect())
}

/// `F̄^p = σ(F^p)`.
pub fn conjugate_filtration(f: &Filtration, sigma: &RealStructure) -> Result<Filtration> {
    if sigma.dim() != f.dim() {
        return Err(Error::DimensionMismatch("real structure vs filtration".into()));
    }
    Ok(Filtration {
        dim: f.dim,
        p_min: f.p_min,
        levels: f.levels.iter().map(|s| sigma.apply_subspace(s)).collect(),
    })
}

/// Whether `V ⊗ ℂ = ⊕_{p+q=n} F^p ∩ F̄^q`.
pub fn is_pure_hodge(v: &RationalSpace, f: &Filtration, sigma: &RealStructure, n: i64) -> bool {
    let Ok(fbar) = conjugate_filtration(f, sigma) else {
        return false;
    };
    if v.dim() != f.dim() {
        return false;
    }
    is_opposed_pair(f, &fbar, n)
}

/// `F` and `G` are `n`-opposed: `ℂ^dim = ⊕_{p} F^p ∩ G^{n−p}`.
pub fn is_opposed_pair(f: &Filtration, g: &Filtration, n: i64) -> bool {
    let dim = f.dim();
    if dim == 0 {
        return true;
    }
    let lo = f.p_min().min(n - g.p_max()) - 1;
    let hi = f.p_max().max(n - g.p_min()) + 1;
    let mut total = 0;
    let mut sum = Subspace::zero(dim);
    for p in lo..=hi {
        let piece = f.at(p).intersect(&g.at(n - p));
        total += piece.dim();
        sum = sum.sum(&piece);
    }
    total == dim && sum.dim() == dim
}

/// One term of a complex of filtered rational spaces.
#[derive(Clone, Debug)]
pub struct FilteredTerm {
    pub degree: i64,
    pub filtration: Filtration,
}

/// A bounded complex `C^a → C^{a+1} → ...` of rational spaces with filtrations
/// on the complexifications; `differentials[k]` maps term `k` to term `k+1`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub terms: Vec<FilteredTerm>,
    pub differentials: Vec<Matrix<Q>>,
}

/// Real dimensions of the cohomology of the cone of
/// `F^0(C_ℂ) ⊕ C_ℝ → C_ℂ`, indexed so that `H^m` is weak-Hodge cohomology.
pub fn weak_hodge_cohomology(c: &FilteredComplex) -> Result<BTreeMap<i64, usize>> {
    let n_terms = c.terms.len();
    if c.differentials.len() + 1 != n_terms && !(n_terms == 0 && c.differentials.is_empty()) {
        return Err(Error::DimensionMismatch("need one differential between consecutive terms".into()));
    }
    for w in c.terms.windows(2) {
        if w[1].degree != w[0].degree + 1 {
            return Err(Error::Invalid("terms must sit in consecutive degrees".into()));
        }
    }
    let dims: Vec<usize> = c.terms.iter().map(|t| t.filtration.dim()).collect();
    for (k, d) in c.differentials.iter().enumerate() {
        if d.cols() != dims[k] || d.rows() != dims[k + 1] {
            return Err(Error::DimensionMismatch(format!("differential {k}")));
        }
    }
    for k in 1..c.differentials.len() {
        if !c.differentials[k].mul_ref(&c.differentials[k - 1]).is_zero() {
            return Err(Error::NotAChainMap(format!("d∘d ≠ 0 at term {k}")));
        }
    }
    // real coordinates of V_ℂ: (re, im) ∈ ℚ^{2n}
    let f0_real: Vec<Matrix<Q>> = c
        .terms
        .iter()
        .map(|t| {
            let n = t.filtration.dim();
            let s = t.filtration.at(0);
            let mut cols: Vec<Vec<Q>> = Vec::new();
            for b in s.basis() {
                let mut v1: Vec<Q> = b.iter().map(|a| a.re.clone()).collect();
                v1.extend(b.iter().map(|a| a.im.clone()));
                let mut v2: Vec<Q> = b.iter().map(|a| -a.im.clone()).collect();
                v2.extend(b.iter().map(|a| a.re.clone()));
                cols.push(v1);
                cols.push(v2);
            }
            Matrix::from_cols(&cols, 2 * n)
        })
        .collect();
    let d_c: Vec<Matrix<Q>> = c.differentials.iter().map(|d| d.direct_sum(d)).collect();
    for (k, d) in c.differentials.iter().enumerate() {
        let dc = d.complexify();
        if !c.terms[k].filtration.at(0).image(&dc).is_subspace_of(&c.terms[k + 1].filtration.at(0)) {
            return Err(Error::NotAChainMap(format!("differential {k} does not preserve F^0")));
        }
    }
    // cone term K^m = F0^m ⊕ V_ℝ^m ⊕ V_ℂ^{m−1}, with D(a,b,c) = (da, db, a − b − dc)
    let f0_dim: Vec<usize> = f0_real.iter().map(|m| m.cols()).collect();
    let k_dim = |k: isize| -> (usize, usize, usize) {
        let own = if k >= 0 && (k as usize) < n_terms { (f0_dim[k as usize], dims[k as usize]) } else { (0, 0) };
        let prev = if k >= 1 && ((k - 1) as usize) < n_terms { 2 * dims[(k - 1) as usize] } else { 0 };
        (own.0, own.1, prev)
    };
    let cone_d = |k: isize| -> Matrix<Q> {
        let (a0, b0, c0) = k_dim(k);
        let (a1, b1, c1) = k_dim(k + 1);
        let mut m = Matrix::zeros(a1 + b1 + c1, a0 + b0 + c0);
        if k >= 0 && (k as usize) < n_terms {
            let ku = k as usize;
            let n = dims[ku];
            if ku + 1 < n_terms {
                // d on F^0 in F^0-coordinates
                let img = d_c[ku].mul_ref(&f0_real[ku]);
                let coords = f0_real[ku + 1].solve_matrix(&img).expect("F^0 preserved");
                for i in 0..a1 {
                    for j in 0..a0 {
                        m[(i, j)] = coords[(i, j)].clone();
                    }
                }
                for i in 0..b1 {
                    for j in 0..b0 {
                        m[(a1 + i, a0 + j)] = c.differentials[ku][(i, j)].clone();
                    }
                }
            }
            // a − b into V_ℂ^{k} which is the third block of K^{k+1}
            for i in 0..2 * n {
                for j in 0..a0 {
                    m[(a1 + b1 + i, j)] = f0_real[ku][(i, j)].clone();
                }
            }
            for i in 0..n {
                m[(a1 + b1 + i, a0 + i)] = -Q::one();
            }
        }
        if k >= 1 && ((k - 1) as usize) + 1 < n_terms {
            let ku = (k - 1) as usize;
            for i in 0..c1 {
                for j in 0..c0 {
                    m[(a1 + b1 + i, a0 + b0 + j)] = -d_c[ku][(i, j)].clone();
                }
            }
        }
        m
    };
    let mut out = BTreeMap::new();
    let base = c.terms.first().map_or(0, |t| t.degree);
    for k in 0..=(n_terms as isize) {
        let (a, b, cc) = k_dim(k);
        let dim_k = a + b + cc;
        let rank_out = cone_d(k).rank();
        let rank_in = if k >= 1 { cone_d(k - 1).rank() } else { 0 };
        out.insert(base + k as i64, dim_k - rank_out - rank_in);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{q_int, Gauss};

    fn g(re: i64, im: i64) -> Gauss {
        Gauss::new(q_int(re), q_int(im))
    }

    fn elliptic_h1() -> Filtration {
        let line = Subspace::span(2, &[vec![g(1, 0), g(0, 1)]]);
        Filtration::from_steps(2, vec![(0, Subspace::full(2)), (1, line)]).unwrap()
    }

    #[test]
    fn rees_jump_examples() {
        let v3 = RationalSpace::standard(3);
        let f = Filtration::from_steps(3, vec![(0, Subspace::full(3)), (1, Subspace::zero(3))]).unwrap();
        assert_eq!(rees_jumps(&v3, &f).unwrap(), vec![0, 0, 0]);
        let v2 = RationalSpace::standard(2);
        let f = Filtration::from_steps(
            2,
            vec![(-1, Subspace::full(2)), (0, Subspace::coordinate(2, &[0])), (1, Subspace::zero(2))],
        )
        .unwrap();
        assert_eq!(rees_jumps(&v2, &f).unwrap(), vec![-1, 0]);
    }

    #[test]
    fn truncated_s_ring_jumps() {
        // 𝒮/(x²) with basis (1, x); F^1 = (x − i)·ℚ(i)[x] mod x² = span(−i + x)
        let f = Filtration::from_steps(
            2,
            vec![(0, Subspace::full(2)), (1, Subspace::span(2, &[vec![g(0, -1), g(1, 0)]]))],
        )
        .unwrap();
        assert_eq!(rees_jumps(&RationalSpace::standard(2), &f).unwrap(), vec![0, 1]);
    }

    #[test]
    fn rejects_bad_filtrations() {
        let line = Subspace::coordinate(2, &[0]);
        let other = Subspace::coordinate(2, &[1]);
        assert_eq!(
            Filtration::from_steps(2, vec![(0, line.clone()), (1, Subspace::zero(2))]),
            Err(Error::NonExhaustive(0))
        );
        assert_eq!(
            Filtration::from_steps(2, vec![(0, Subspace::full(2)), (1, line), (2, other)]),
            Err(Error::NonDecreasing(2))
        );
    }

    #[test]
    fn conjugation_examples() {
        let sigma = RealStructure::standard(2);
        let f = elliptic_h1();
        let fbar = conjugate_filtration(&f, &sigma).unwrap();
        assert_eq!(fbar.at(1), Subspace::span(2, &[vec![g(1, 0), g(0, -1)]]));
        assert_eq!(conjugate_filtration(&fbar, &sigma).unwrap(), f);
        let real = Filtration::from_levels(&[0, 1]);
        assert_eq!(conjugate_filtration(&real, &sigma).unwrap(), real);
    }

    #[test]
    fn purity_examples() {
        let sigma1 = RealStructure::standard(1);
        assert!(is_pure_hodge(&RationalSpace::standard(1), &Filtration::trivial(1, 0), &sigma1, 0));
        let v = RationalSpace::standard(2);
        let sigma = RealStructure::standard(2);
        assert!(is_pure_hodge(&v, &elliptic_h1(), &sigma, 1));
        assert!(!is_pure_hodge(&v, &elliptic_h1(), &sigma, 2));
        // a real line as F^1 is not pure of weight 1
        let bad = Filtration::from_levels(&[1, 0]);
        assert!(!is_pure_hodge(&v, &bad, &sigma, 1));
    }

    #[test]
    fn weak_hodge_examples() {
        let single = |f: Filtration| FilteredComplex {
            terms: vec![FilteredTerm { degree: 0, filtration: f }],
            differentials: vec![],
        };
        let h = weak_hodge_cohomology(&single(Filtration::trivial(1, 0))).unwrap();
        assert_eq!((h[&0], h[&1]), (1, 0));
        // type (1,1): F^1 = V, so F^0 = V as well
        let h = weak_hodge_cohomology(&single(Filtration::trivial(1, 1))).unwrap();
        assert_eq!((h[&0], h[&1]), (1, 0));
        // Tate object ℝ(1) of type (−1,−1): F^0 = 0
        let h = weak_hodge_cohomology(&single(Filtration::trivial(1, -1))).unwrap();
        assert_eq!((h[&0], h[&1]), (0, 1));
        let empty = FilteredComplex { terms: vec![], differentials: vec![] };
        assert!(weak_hodge_cohomology(&empty).unwrap().values().all(|&d| d == 0));
    }

    #[test]
    fn weak_hodge_of_acyclic_complex_vanishes() {
        let f = Filtration::trivial(1, 0);
        let c = FilteredComplex {
            terms: vec![
                FilteredTerm { degree: 0, filtration: f.clone() },
                FilteredTerm { degree: 1, filtration: f },
            ],
            differentials: vec![Matrix::identity(1)],
        };
        let h = weak_hodge_cohomology(&c).unwrap();
        assert!(h.values().all(|&d| d == 0), "{h:?}");
    }

    #[test]
    fn weak_hodge_rejects_filtration_breaking_differential() {
        let c = FilteredComplex {
            terms: vec![
                FilteredTerm { degree: 0, filtration: Filtration::trivial(1, 0) },
                FilteredTerm { degree: 1, filtration: Filtration::trivial(1, -1) },
            ],
            differentials: vec![Matrix::identity(1)],
        };
        assert!(matches!(weak_hodge_cohomology(&c), Err(Error::NotAChainMap(_))));
    }
}
