//! Mixed Hodge and mixed twistor structures: opposedness, Hodge numbers, the
//! γ filtration, Tate twists, twistor bundle types and 𝒮-splittings.

mod polymat;
mod split;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filt::{conjugate_filtration, Filtration, RationalSpace, RealStructure};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Gauss, Q};

pub use polymat::PolyMatrix;
pub use split::{
    check_splitting, is_torsor_element, s_split, splitting_difference, verify_splitting, SplittingCertificate,
};

/// Increasing, exhaustive and separated filtration of `ℚ^dim` by rational
/// subspaces.
///
/// `W_n` for an unlisted `n` equals the closest listed step below it and is
/// zero below the lowest listed step.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFiltration {
    dim: usize,
    steps: BTreeMap<i64, Subspace<Q>>,
}

impl WeightFiltration {
    pub fn from_steps(dim: usize, steps: Vec<(i64, Subspace<Q>)>) -> Result<Self> {
        let steps: BTreeMap<i64, Subspace<Q>> = steps.into_iter().collect();
        if steps.values().any(|s| s.ambient() != dim) {
            return Err(Error::DimensionMismatch("weight step ambient".into()));
        }
        let mut prev: Option<&Subspace<Q>> = None;
        for (n, s) in &steps {
            if prev.is_some_and(|p| !p.is_subspace_of(s)) {
                return Err(Error::NonIncreasing(*n));
            }
            prev = Some(s);
        }
        match steps.iter().next_back() {
            Some((&n, s)) if !s.is_full() => return Err(Error::NonExhaustive(n)),
            None if dim > 0 => return Err(Error::NonExhaustive(0)),
            _ => {}
        }
        let mut out = BTreeMap::new();
        let mut last: Option<usize> = None;
        for (n, s) in steps {
            if last != Some(s.dim()) && !s.is_zero() {
                last = Some(s.dim());
                out.insert(n, s);
            }
        }
        Ok(WeightFiltration { dim, steps: out })
    }

    /// `W_{n−1} = 0`, `W_n = V`.
    pub fn pure(dim: usize, n: i64) -> Self {
        WeightFiltration::from_steps(dim, vec![(n, Subspace::full(dim))]).expect("pure")
    }

    /// Filtration with `W_n` spanned by the basis vectors of weight `≤ n`.
    pub fn from_weights(weights: &[i64]) -> Self {
        let dim = weights.len();
        let mut ws: Vec<i64> = weights.to_vec();
        ws.sort();
        ws.dedup();
        let steps = ws
            .iter()
            .map(|&n| {
                let idx: Vec<usize> = (0..dim).filter(|&i| weights[i] <= n).collect();
                (n, Subspace::coordinate(dim, &idx))
            })
            .collect();
        WeightFiltration::from_steps(dim, steps).expect("coordinate flags are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, n: i64) -> Subspace<Q> {
        self.steps.range(..=n).next_back().map(|(_, s)| s.clone()).unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn gr_dim(&self, n: i64) -> usize {
        self.at(n).dim() - self.at(n - 1).dim()
    }

    /// Weights `n` with `gr^W_n ≠ 0`, ascending.
    pub fn weights(&self) -> Vec<i64> {
        self.steps.keys().copied().collect()
    }

    /// Steps `(n, W_n)` at the jumps.
    pub fn steps(&self) -> Vec<(i64, Subspace<Q>)> {
        self.steps.iter().map(|(n, s)| (*n, s.clone())).collect()
    }

    /// Reindexing `W'_n = W_{n+k}`.
    pub fn shift(&self, k: i64) -> Self {
        WeightFiltration { dim: self.dim, steps: self.steps.iter().map(|(n, s)| (n - k, s.clone())).collect() }
    }

    pub fn transform(&self, m: &Matrix<Q>) -> Self {
        WeightFiltration { dim: self.dim, steps: self.steps.iter().map(|(n, s)| (*n, s.image(m))).collect() }
    }

    /// Adapted basis: for ascending weights, vectors completing a basis of
    /// `W_{n−1}` to one of `W_n`. Returns the basis as columns together with the
    /// weight of each column.
    pub fn adapted_basis(&self) -> (Matrix<Q>, Vec<i64>) {
        let mut cols = Vec::new();
        let mut weights = Vec::new();
        let mut below = Subspace::zero(self.dim);
        for (n, s) in &self.steps {
            for v in s.complement_in(&below) {
                cols.push(v);
                weights.push(*n);
            }
            below = s.clone();
        }
        (Matrix::from_cols(&cols, self.dim), weights)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StructureKind {
    Mhs,
    Mts,
}

/// Candidate mixed Hodge (or twistor) structure `(V, W, F, F⁻)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedStructure {
    space: RationalSpace,
    weight: WeightFiltration,
    hodge: Filtration,
    hodge_minus: Option<Filtration>,
    kind: StructureKind,
}

impl MixedStructure {
    pub fn new(
        space: RationalSpace,
        weight: WeightFiltration,
        hodge: Filtration,
        hodge_minus: Option<Filtration>,
        kind: StructureKind,
    ) -> Result<Self> {
        let d = space.dim();
        if weight.dim() != d || hodge.dim() != d || hodge_minus.as_ref().is_some_and(|f| f.dim() != d) {
            return Err(Error::DimensionMismatch("mixed structure components".into()));
        }
        if kind == StructureKind::Mhs {
            if let Some(fm) = &hodge_minus {
                let fbar = conjugate_filtration(&hodge, &RealStructure::standard(d))?;
                if !same_filtration(fm, &fbar) {
                    return Err(Error::Invalid("second filtration of an MHS must be the conjugate".into()));
                }
            }
        }
        Ok(MixedStructure { space, weight, hodge, hodge_minus, kind })
    }

    /// Mixed Hodge structure on `ℚ^dim` with the standard real structure.
    pub fn mhs(weight: WeightFiltration, hodge: Filtration) -> Result<Self> {
        let d = weight.dim();
        MixedStructure::new(RationalSpace::standard(d), weight, hodge, None, StructureKind::Mhs)
    }

    pub fn space(&self) -> &RationalSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn weight(&self) -> &WeightFiltration {
        &self.weight
    }

    pub fn hodge(&self) -> &Filtration {
        &self.hodge
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    /// The second chart filtration: explicit if given, else the conjugate of `F`.
    pub fn hodge_minus(&self) -> Filtration {
        match &self.hodge_minus {
            Some(f) => f.clone(),
            None => conjugate_filtration(&self.hodge, &RealStructure::standard(self.dim())).expect("dimensions match"),
        }
    }

    /// Structure in new coordinates `v' = P v`.
    pub fn change_basis(&self, p: &Matrix<Q>) -> Result<Self> {
        if p.rows() != self.dim() || p.inverse().is_none() {
            return Err(Error::Singular);
        }
        let pc = p.complexify();
        MixedStructure::new(
            self.space.clone(),
            self.weight.transform(p),
            self.hodge.transform(&pc),
            self.hodge_minus.as_ref().map(|f| f.transform(&pc)),
            self.kind,
        )
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.kind != o.kind {
            return Err(Error::Invalid("direct sum of an MHS and an MTS".into()));
        }
        let d = self.dim() + o.dim();
        let mut ns: Vec<i64> = self.weight.weights();
        ns.extend(o.weight.weights());
        ns.sort();
        ns.dedup();
        let steps = ns
            .iter()
            .map(|&n| {
                let mut v: Vec<Vec<Q>> = Vec::new();
                for b in self.weight.at(n).basis() {
                    let mut w = b.clone();
                    w.resize(d, Q::default());
                    v.push(w);
                }
                for b in o.weight.at(n).basis() {
                    let mut w = vec![Q::default(); self.dim()];
                    w.extend(b.iter().cloned());
                    v.push(w);
                }
                (n, Subspace::span(d, &v))
            })
            .collect();
        let weight = WeightFiltration::from_steps(d, steps)?;
        let hodge_minus = match (&self.hodge_minus, &o.hodge_minus) {
            (None, None) => None,
            _ => Some(self.hodge_minus().direct_sum(&o.hodge_minus())),
        };
        let mut labels: Vec<String> = self.space.labels().iter().map(|l| format!("{l}.0")).collect();
        labels.extend(o.space.labels().iter().map(|l| format!("{l}.1")));
        MixedStructure::new(
            RationalSpace::new(labels)?,
            weight,
            self.hodge.direct_sum(&o.hodge),
            hodge_minus,
            self.kind,
        )
    }

    /// For each weight with `gr^W_n ≠ 0`: the filtrations induced by `F` and
    /// `F⁻` on `gr^W_n ⊗ ℂ`, in the coordinates of an adapted basis.
    pub fn graded_pieces(&self) -> Vec<(i64, Filtration, Filtration)> {
        let (l, ws) = self.weight.adapted_basis();
        graded_pieces_for(self, &l, &ws)
    }
}

fn same_filtration(a: &Filtration, b: &Filtration) -> bool {
    let lo = a.p_min().min(b.p_min());
    let hi = a.p_max().max(b.p_max()) + 1;
    (lo..=hi).all(|p| a.at(p) == b.at(p))
}

/// Induced filtrations on each `gr^W_n`, in the coordinates given by the
/// columns of `lifts` of weight `n`.
pub(crate) fn graded_pieces_for(m: &MixedStructure, lifts: &Matrix<Q>, weights: &[i64]) -> Vec<(i64, Filtration, Filtration)> {
    let linv = lifts.inverse().expect("adapted basis is invertible").complexify();
    let fm = m.hodge_minus();
    let mut ns: Vec<i64> = weights.to_vec();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let rows: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] == n).collect();
            let all: Vec<usize> = (0..linv.cols()).collect();
            let q = linv.submatrix(&rows, &all);
            let sub = m.weight.at(n).complexify();
            (n, m.hodge.induced(&sub, &q), fm.induced(&sub, &q))
        })
        .collect()
}

/// `dim gr_F^i gr_G^j` for all `(i, j)` with a nonzero value.
pub fn bigraded_dims(f: &Filtration, g: &Filtration) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    if f.dim() == 0 {
        return out;
    }
    let d = |i: i64, j: i64| f.at(i).intersect(&g.at(j)).dim() as i64;
    for i in f.p_min()..=f.p_max() {
        for j in g.p_min()..=g.p_max() {
            let v = d(i, j) - d(i + 1, j) - d(i, j + 1) + d(i + 1, j + 1);
            if v != 0 {
                out.insert((i, j), v as usize);
            }
        }
    }
    out
}

/// A nonzero `gr^W_n gr_F^i gr_{F⁻}^j` with `i + j ≠ n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub weight: i64,
    pub i: i64,
    pub j: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opposedness {
    pub opposed: bool,
    pub violations: Vec<Violation>,
}

pub fn check_opposedness(m: &MixedStructure) -> Opposedness {
    let mut violations = Vec::new();
    for (n, f, g) in m.graded_pieces() {
        for ((i, j), dim) in bigraded_dims(&f, &g) {
            if i + j != n {
                violations.push(Violation { weight: n, i, j, dim });
            }
        }
    }
    Opposedness { opposed: violations.is_empty(), violations }
}

/// `h^{p,q} = dim gr_F^p gr_{F⁻}^q gr^W_{p+q}`.
pub fn hodge_numbers(m: &MixedStructure) -> Result<BTreeMap<(i64, i64), usize>> {
    let report = check_opposedness(m);
    if !report.opposed {
        return Err(Error::NotOpposed(format!("{} forbidden graded pieces", report.violations.len())));
    }
    let mut out = BTreeMap::new();
    for (_, f, g) in m.graded_pieces() {
        for (k, v) in bigraded_dims(&f, &g) {
            *out.entry(k).or_insert(0) += v;
        }
    }
    if m.kind == StructureKind::Mhs && out.iter().any(|(&(p, q), v)| out.get(&(q, p)) != Some(v)) {
        return Err(Error::IdentityFailed("Hodge numbers are not symmetric".into()));
    }
    Ok(out)
}

/// `γ^p V = V ∩ F^p(V ⊗ ℂ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFiltration {
    pub steps: BTreeMap<i64, Subspace<Q>>,
}

impl GammaFiltration {
    /// `γ^p`; the stored steps are contiguous, with `γ^p = V` below them and
    /// zero above.
    pub fn at(&self, p: i64) -> Subspace<Q> {
        if let Some(s) = self.steps.get(&p) {
            return s.clone();
        }
        match self.steps.iter().next() {
            Some((&lo, s)) if p < lo => Subspace::full(s.ambient()),
            Some((_, s)) => Subspace::zero(s.ambient()),
            None => Subspace::zero(0),
        }
    }
}

pub fn gamma_filtration(m: &MixedStructure) -> GammaFiltration {
    let f = &m.hodge;
    let steps = (f.p_min()..=f.p_max() + 1).map(|p| (p, f.at(p).real_points())).collect();
    GammaFiltration { steps }
}

/// Forgets the real linkage: the second chart becomes the explicit conjugate.
pub fn mts_underlying(m: &MixedStructure) -> Result<MixedStructure> {
    if m.kind != StructureKind::Mhs {
        return Err(Error::Invalid("expected an MHS".into()));
    }
    MixedStructure::new(m.space.clone(), m.weight.clone(), m.hodge.clone(), Some(m.hodge_minus()), StructureKind::Mts)
}

/// Tate twist `M(n)`: `F(n)^p = F^{p+n}` on both charts and `W(n)_k = W_{k+2n}`.
pub fn tate_twist(m: &MixedStructure, n: i64) -> MixedStructure {
    MixedStructure {
        space: m.space.clone(),
        weight: m.weight.shift(2 * n),
        hodge: m.hodge.shift(n),
        hodge_minus: m.hodge_minus.as_ref().map(|f| f.shift(n)),
        kind: m.kind,
    }
}

/// Splitting type on `ℙ¹` of each `gr^W_n` of the twistor bundle: one slope
/// `p + q` for every line of bidegree `(p, q)` in the common refinement of the
/// two charts.
pub fn bundle_type(m: &MixedStructure) -> BTreeMap<i64, Vec<i64>> {
    m.graded_pieces()
        .into_iter()
        .map(|(n, f, g)| {
            let mut slopes: Vec<i64> =
                bigraded_dims(&f, &g).into_iter().flat_map(|((p, q), d)| std::iter::repeat_n(p + q, d)).collect();
            slopes.sort();
            (n, slopes)
        })
        .collect()
}

/// Every slope in weight `n` equals `n`.
pub fn is_valid_mts(m: &MixedStructure) -> bool {
    bundle_type(m).iter().all(|(n, s)| s.iter().all(|x| x == n))
}

/// Pure Hodge structure of weight `n` on `ℚ^dim` from a basis of `V ⊗ ℂ` and
/// the Hodge level `p` of each basis vector.
pub fn pure_from_levels(basis: &Matrix<Gauss>, levels: &[i64], n: i64) -> Result<MixedStructure> {
    let d = basis.rows();
    if basis.cols() != levels.len() || !basis.is_square() {
        return Err(Error::DimensionMismatch("basis and levels".into()));
    }
    let hodge = Filtration::from_levels(levels).transform(basis);
    MixedStructure::mhs(WeightFiltration::pure(d, n), hodge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{q_int, Field};

    fn g(re: i64, im: i64) -> Gauss {
        Gauss::new(q_int(re), q_int(im))
    }

    /// `H¹` of an elliptic curve: `F¹` spanned by `e0 + i e1`.
    pub(crate) fn elliptic_h1() -> MixedStructure {
        let f1 = Subspace::span(2, &[vec![g(1, 0), g(0, 1)]]);
        let hodge = Filtration::from_steps(2, vec![(0, Subspace::full(2)), (1, f1)]).unwrap();
        MixedStructure::mhs(WeightFiltration::pure(2, 1), hodge).unwrap()
    }

    fn trivial() -> MixedStructure {
        MixedStructure::mhs(WeightFiltration::pure(1, 0), Filtration::trivial(1, 0)).unwrap()
    }

    fn truncated_s() -> MixedStructure {
        let f1 = Subspace::span(2, &[vec![g(0, -1), g(1, 0)]]);
        let hodge = Filtration::from_steps(2, vec![(0, Subspace::full(2)), (1, f1)]).unwrap();
        MixedStructure::mhs(WeightFiltration::pure(2, 0), hodge).unwrap()
    }

    #[test]
    fn trivial_and_elliptic_hodge_numbers() {
        assert_eq!(hodge_numbers(&trivial()).unwrap(), BTreeMap::from([((0, 0), 1)]));
        assert_eq!(hodge_numbers(&elliptic_h1()).unwrap(), BTreeMap::from([((1, 0), 1), ((0, 1), 1)]));
        let s = trivial().direct_sum(&elliptic_h1()).unwrap();
        assert_eq!(hodge_numbers(&s).unwrap(), BTreeMap::from([((0, 0), 1), ((1, 0), 1), ((0, 1), 1)]));
    }

    #[test]
    fn truncated_s_is_not_opposed() {
        let r = check_opposedness(&truncated_s());
        assert!(!r.opposed);
        assert_eq!(
            r.violations,
            vec![Violation { weight: 0, i: 0, j: 1, dim: 1 }, Violation { weight: 0, i: 1, j: 0, dim: 1 }]
        );
        assert!(matches!(hodge_numbers(&truncated_s()), Err(Error::NotOpposed(_))));
    }

    #[test]
    fn tate_stack_brute_force() {
        // ℚ(0) ⊕ ℚ(1) glued by F¹ = span(e0 + e1): weights 0 and −2.
        let w = WeightFiltration::from_weights(&[0, -2]);
        let f = Filtration::from_steps(
            2,
            vec![
                (-1, Subspace::full(2)),
                (0, Subspace::span(2, &[vec![g(1, 0), g(1, 0)]])),
            ],
        )
        .unwrap();
        let m = MixedStructure::mhs(w, f).unwrap();
        assert!(check_opposedness(&m).opposed);
        assert_eq!(hodge_numbers(&m).unwrap(), BTreeMap::from([((-1, -1), 1), ((0, 0), 1)]));
        // Shifting the Hodge level breaks purity of both graded pieces.
        let bad = MixedStructure::mhs(m.weight().clone(), m.hodge().shift(1)).unwrap();
        let r = check_opposedness(&bad);
        assert_eq!(
            r.violations,
            vec![Violation { weight: -2, i: -2, j: -2, dim: 1 }, Violation { weight: 0, i: -1, j: -1, dim: 1 }]
        );
    }

    #[test]
    fn tate_twist_shifts_hodge_numbers_and_slopes() {
        let m = elliptic_h1().direct_sum(&trivial()).unwrap();
        let t = tate_twist(&m, 2);
        let h: BTreeMap<(i64, i64), usize> =
            hodge_numbers(&m).unwrap().into_iter().map(|((p, q), v)| ((p - 2, q - 2), v)).collect();
        assert_eq!(hodge_numbers(&t).unwrap(), h);
        let b = bundle_type(&mts_underlying(&t).unwrap());
        assert_eq!(b, BTreeMap::from([(-4, vec![-4]), (-3, vec![-3, -3])]));
    }

    #[test]
    fn mts_of_mhs_is_valid() {
        let m = mts_underlying(&elliptic_h1()).unwrap();
        assert_eq!(m.kind(), StructureKind::Mts);
        assert!(check_opposedness(&m).opposed);
        assert_eq!(bundle_type(&m), BTreeMap::from([(1, vec![1, 1])]));
        assert!(is_valid_mts(&m));
    }

    #[test]
    fn coincident_charts_give_slope_two() {
        let f = Filtration::trivial(1, 1);
        let m = MixedStructure::new(
            RationalSpace::standard(1),
            WeightFiltration::pure(1, 0),
            f.clone(),
            Some(f),
            StructureKind::Mts,
        )
        .unwrap();
        assert_eq!(bundle_type(&m), BTreeMap::from([(0, vec![2])]));
        assert!(!is_valid_mts(&m));
    }

    #[test]
    fn mhs_rejects_foreign_second_chart() {
        let m = elliptic_h1();
        let r = MixedStructure::new(
            m.space().clone(),
            m.weight().clone(),
            m.hodge().clone(),
            Some(m.hodge().clone()),
            StructureKind::Mhs,
        );
        assert!(r.is_err());
    }

    #[test]
    fn weight_filtration_validation() {
        let a = Subspace::coordinate(2, &[0]);
        let b = Subspace::coordinate(2, &[1]);
        assert_eq!(WeightFiltration::from_steps(2, vec![(0, a.clone()), (1, b)]), Err(Error::NonIncreasing(1)));
        assert_eq!(WeightFiltration::from_steps(2, vec![(0, a)]), Err(Error::NonExhaustive(0)));
    }

    #[test]
    fn gamma_of_tate_stack() {
        let w = WeightFiltration::from_weights(&[0, -2]);
        let f = Filtration::from_steps(
            2,
            vec![(-1, Subspace::full(2)), (0, Subspace::span(2, &[vec![g(1, 0), g(0, 1)]]))],
        )
        .unwrap();
        let m = MixedStructure::mhs(w, f).unwrap();
        let gamma = gamma_filtration(&m);
        assert!(gamma.at(-1).is_full());
        assert!(gamma.at(0).is_zero());
        let f2 = Filtration::from_steps(
            2,
            vec![(-1, Subspace::full(2)), (0, Subspace::span(2, &[vec![Gauss::one(), Gauss::one()]]))],
        )
        .unwrap();
        let m2 = MixedStructure::mhs(m.weight().clone(), f2).unwrap();
        assert_eq!(gamma_filtration(&m2).at(0).dim(), 1);
    }

    #[test]
    fn opposedness_invariant_under_basis_change() {
        let m = elliptic_h1().direct_sum(&trivial()).unwrap();
        let p = Matrix::from_rows(
            vec![
                vec![q_int(1), q_int(2), q_int(0)],
                vec![q_int(0), q_int(1), q_int(3)],
                vec![q_int(1), q_int(0), q_int(1)],
            ],
            3,
        );
        let m2 = m.change_basis(&p).unwrap();
        assert_eq!(hodge_numbers(&m2).unwrap(), hodge_numbers(&m).unwrap());
    }
}
