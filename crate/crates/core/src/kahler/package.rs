use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::rht::{validate_algebra, GCAlgebra};
use crate::scalars::{q_int, q_to_string, Field, Gauss, Q};

/// Finite-dimensional Kähler package: a graded-commutative algebra with a
/// positive-definite inner product and real operators `d`, `dᶜ`, `Λ`.
///
/// The complex structure is given by the real operator `C` (the `weil`
/// field) acting as `i(p − q)` on forms of type `(p, q)`; then `∂`, `∂̄` are
/// the type components of `d` and `dᶜ = [C, d] = i∂ − i∂̄`. When `d = 0` the
/// operator may be omitted and the bitypes of the algebra basis are used.
///
/// Matrices act on column vectors: column `j` is the image of basis vector `j`.
#[derive(Clone, Debug)]
pub struct KahlerPackage {
    algebra: GCAlgebra,
    gram: Matrix<Q>,
    d: Matrix<Q>,
    dc: Matrix<Q>,
    lambda: Matrix<Q>,
    weil: Option<Matrix<Q>>,
    d_star: Matrix<Q>,
    dc_star: Matrix<Q>,
    laplacian: Matrix<Q>,
    harmonic: Vec<Vec<Q>>,
    pr_h: Matrix<Q>,
    green: Matrix<Q>,
}

pub(crate) fn differential_matrix(a: &GCAlgebra) -> Matrix<Q> {
    let n = a.dim();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for (j, c) in a.d_basis(i) {
            m[(*j, i)] = c.clone();
        }
    }
    m
}

pub(crate) fn to_sparse(v: &[Q]) -> SparseVec<Q> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub(crate) fn to_dense(v: &SparseVec<Q>, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

/// `LDLᵀ` pivots of a symmetric matrix; positive definite iff all are positive.
fn is_positive_definite(g: &Matrix<Q>) -> bool {
    let n = g.rows();
    let mut m = g.clone();
    for k in 0..n {
        let p = m[(k, k)].clone();
        if p <= Q::zero() {
            return false;
        }
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = m[(i, k)].div_ref(&p).expect("nonzero pivot");
            for j in k..n {
                let t = f.mul_ref(&m[(k, j)]);
                m[(i, j)] = m[(i, j)].sub_ref(&t);
            }
        }
    }
    true
}

impl KahlerPackage {
    /// Assembles a package and computes adjoints, Laplacian, harmonic
    /// projection and Green's operator. Structural laws are checked by
    /// [`validate_package`], not here; only shapes, the inner product, and
    /// orthogonality of the unit to the rest of the basis are enforced.
    pub fn new(
        algebra: GCAlgebra,
        gram: Matrix<Q>,
        dc: Matrix<Q>,
        lambda: Matrix<Q>,
        weil: Option<Matrix<Q>>,
    ) -> Result<Self> {
        let n = algebra.dim();
        for (name, m) in [("gram", &gram), ("dc", &dc), ("lambda", &lambda)] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!("{name} must be {n}×{n}, found {}×{}", m.rows(), m.cols())));
            }
        }
        if let Some(c) = &weil {
            if c.rows() != n || c.cols() != n {
                return Err(Error::DimensionMismatch(format!("weil must be {n}×{n}, found {}×{}", c.rows(), c.cols())));
            }
        }
        if gram != gram.transpose() {
            return Err(Error::Invalid("inner product is not symmetric".into()));
        }
        if !is_positive_definite(&gram) {
            return Err(Error::Invalid("inner product is not positive definite".into()));
        }
        let u = algebra.unit();
        if (0..n).any(|j| j != u && !gram[(u, j)].is_zero()) {
            return Err(Error::Invalid("unit is not orthogonal to the other basis vectors".into()));
        }
        let d = differential_matrix(&algebra);
        let gi = gram.inverse().ok_or(Error::Singular)?;
        let adjoint = |m: &Matrix<Q>| gi.mul_ref(&m.transpose()).mul_ref(&gram);
        let d_star = adjoint(&d);
        let dc_star = adjoint(&dc);
        let laplacian = d.mul_ref(&d_star) + d_star.mul_ref(&d);
        let mut harmonic = Vec::new();
        for k in 0..=algebra.max_degree() {
            let idx = algebra.indices_of_degree(k);
            let block = laplacian.submatrix(&idx, &idx);
            for v in block.kernel() {
                let mut full = vec![Q::zero(); n];
                for (a, i) in idx.iter().enumerate() {
                    full[*i] = v[a].clone();
                }
                harmonic.push(full);
            }
        }
        let pr_h = if harmonic.is_empty() {
            Matrix::zeros(n, n)
        } else {
            let b = Matrix::from_cols(&harmonic, n);
            let bt_g = b.transpose().mul_ref(&gram);
            let m = bt_g.mul_ref(&b).inverse().ok_or(Error::Singular)?;
            b.mul_ref(&m).mul_ref(&bt_g)
        };
        let green = (laplacian.clone() + pr_h.clone()).inverse().ok_or(Error::Singular)? - pr_h.clone();
        Ok(KahlerPackage { algebra, gram, d, dc, lambda, weil, d_star, dc_star, laplacian, harmonic, pr_h, green })
    }

    pub fn algebra(&self) -> &GCAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn gram(&self) -> &Matrix<Q> {
        &self.gram
    }

    pub fn d(&self) -> &Matrix<Q> {
        &self.d
    }

    pub fn dc(&self) -> &Matrix<Q> {
        &self.dc
    }

    pub fn lambda(&self) -> &Matrix<Q> {
        &self.lambda
    }

    pub fn weil(&self) -> Option<&Matrix<Q>> {
        self.weil.as_ref()
    }

    pub fn d_star(&self) -> &Matrix<Q> {
        &self.d_star
    }

    pub fn dc_star(&self) -> &Matrix<Q> {
        &self.dc_star
    }

    pub fn laplacian(&self) -> &Matrix<Q> {
        &self.laplacian
    }

    /// Harmonic basis, one kernel vector of `Δ` per row, sorted by degree.
    /// The unit is the first element of degree 0 whenever `H⁰` is the unit line.
    pub fn harmonic(&self) -> &[Vec<Q>] {
        &self.harmonic
    }

    pub fn pr_h(&self) -> &Matrix<Q> {
        &self.pr_h
    }

    pub fn green(&self) -> &Matrix<Q> {
        &self.green
    }

    /// Orthogonal projection onto the span of the given vectors.
    pub fn orthogonal_projection(&self, vectors: &[Vec<Q>]) -> Matrix<Q> {
        let n = self.dim();
        let basis = Subspace::span(n, vectors);
        if basis.is_zero() {
            return Matrix::zeros(n, n);
        }
        let b = basis.matrix();
        let bt_g = b.transpose().mul_ref(&self.gram);
        b.mul_ref(&bt_g.mul_ref(&b).inverse().expect("positive definite")).mul_ref(&bt_g)
    }

    /// Orthogonal projection onto `im(d*dᶜ*)`.
    pub fn pr_i(&self) -> Matrix<Q> {
        self.orthogonal_projection(&self.d_star.mul_ref(&self.dc_star).image())
    }

    /// Adjoint with respect to the inner product.
    pub fn adjoint(&self, m: &Matrix<Q>) -> Matrix<Q> {
        let gi = self.gram.inverse().expect("positive definite");
        gi.mul_ref(&m.transpose()).mul_ref(&self.gram)
    }

    /// The augmentation `x₀*`: the coordinate of the unit.
    pub fn augmentation(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[self.algebra.unit()] = Q::one();
        v
    }

    /// Left multiplication by a basis element, as a matrix.
    pub fn left_mul(&self, i: usize) -> Matrix<Q> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (k, c) in self.algebra.mul_basis(i, j) {
                m[(k, j)] = c;
            }
        }
        m
    }

    pub fn product(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        to_dense(&self.algebra.mul(&to_sparse(x), &to_sparse(y)), self.dim())
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.algebra.degree(i)
    }

    /// Degree of a homogeneous vector.
    pub fn vector_degree(&self, v: &[Q]) -> Option<u32> {
        v.iter().position(|c| !c.is_zero()).map(|i| self.degree(i))
    }

    /// Hodge numbers of the harmonic space, as dimensions over ℚ(i) of the
    /// eigenspaces of `C`, or from the algebra bitypes when `C` is absent.
    pub fn hodge_numbers(&self) -> std::collections::BTreeMap<(i64, i64), usize> {
        let mut out = std::collections::BTreeMap::new();
        let n = self.dim();
        for k in 0..=self.algebra.max_degree() {
            let hk: Vec<Vec<Q>> =
                self.harmonic.iter().filter(|v| self.vector_degree(v) == Some(k)).cloned().collect();
            if hk.is_empty() {
                continue;
            }
            match &self.weil {
                Some(c) => {
                    let basis = Matrix::from_cols(&hk, n);
                    // C restricted to the harmonic block, in harmonic coordinates.
                    let image = c.mul_ref(&basis);
                    let coords = basis.solve_matrix(&image).expect("C preserves harmonic forms");
                    let cg = coords.complexify();
                    for p in 0..=k as i64 {
                        let q = k as i64 - p;
                        let shift = Matrix::identity(hk.len()).scale(&Gauss::new(Q::zero(), q_int(p - q)));
                        let dim = hk.len() - (cg.clone() - shift).rank();
                        if dim > 0 {
                            out.insert((p, q), dim);
                        }
                    }
                }
                None => {
                    for v in &hk {
                        let i = v.iter().position(|c| !c.is_zero()).unwrap();
                        let t = self.algebra.bitype(i).unwrap_or((k as i64 / 2, k as i64 - k as i64 / 2));
                        *out.entry(t).or_insert(0) += 1;
                    }
                }
            }
        }
        out
    }
}

/// One identity checked by [`validate_package`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Report listing every identity with its status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackageReport {
    pub valid: bool,
    pub checks: Vec<Check>,
}

impl PackageReport {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

pub(crate) struct Checker<'a> {
    labels: Vec<String>,
    pub checks: Vec<Check>,
    _p: std::marker::PhantomData<&'a ()>,
}

impl Checker<'_> {
    pub fn new(p: &KahlerPackage) -> Self {
        Checker {
            labels: p.algebra.basis().iter().map(|b| b.label.clone()).collect(),
            checks: Vec::new(),
            _p: std::marker::PhantomData,
        }
    }

    pub fn flag(&mut self, name: &str, passed: bool, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: if passed { None } else { detail } });
    }

    pub fn equal(&mut self, name: &str, lhs: &Matrix<Q>, rhs: &Matrix<Q>) {
        let detail = lhs.first_difference(rhs).map(|(i, j)| {
            format!(
                "entry ({}, {}): {} vs {}",
                self.labels.get(i).map_or(i.to_string(), Clone::clone),
                self.labels.get(j).map_or(j.to_string(), Clone::clone),
                q_to_string(&lhs[(i, j)]),
                q_to_string(&rhs[(i, j)])
            )
        });
        self.flag(name, detail.is_none(), detail);
    }

    pub fn zero(&mut self, name: &str, m: &Matrix<Q>) {
        let z = Matrix::zeros(m.rows(), m.cols());
        self.equal(name, m, &z);
    }
}

fn degree_offender(p: &KahlerPackage, m: &Matrix<Q>, shift: i64) -> Option<String> {
    let n = p.dim();
    for j in 0..n {
        for i in 0..n {
            if !m[(i, j)].is_zero() && p.degree(i) as i64 != p.degree(j) as i64 + shift {
                return Some(format!("entry ({i}, {j}) maps degree {} to {}", p.degree(j), p.degree(i)));
            }
        }
    }
    None
}

fn derivation_offender(p: &KahlerPackage, m: &Matrix<Q>, odd: bool) -> Option<String> {
    let n = p.dim();
    let a = &p.algebra;
    let apply = |v: &SparseVec<Q>| -> SparseVec<Q> { to_sparse(&m.mul_vec(&to_dense(v, n))) };
    for i in 0..n {
        for j in 0..n {
            let ei = SparseVec::from([(i, Q::one())]);
            let ej = SparseVec::from([(j, Q::one())]);
            let lhs = apply(&a.mul_basis(i, j));
            let mut rhs = a.mul(&apply(&ei), &ej);
            let s = if odd && p.degree(i) % 2 == 1 { -Q::one() } else { Q::one() };
            crate::linalg::sparse_axpy(&mut rhs, &s, &a.mul(&ei, &apply(&ej)));
            let mut diff = lhs;
            crate::linalg::sparse_axpy(&mut diff, &-Q::one(), &rhs);
            if diff.values().any(|c| !c.is_zero()) {
                return Some(format!("fails on ({}, {})", a.basis()[i].label, a.basis()[j].label));
            }
        }
    }
    None
}

/// Principle of two types: `ker d ∩ ker dᶜ ∩ (im d + im dᶜ) = im ddᶜ`.
pub fn two_types_holds(d: &Matrix<Q>, dc: &Matrix<Q>) -> bool {
    let n = d.rows();
    let kd = Subspace::span(n, &d.kernel());
    let kdc = Subspace::span(n, &dc.kernel());
    let im = Subspace::column_span(d).sum(&Subspace::column_span(dc));
    kd.intersect(&kdc).intersect(&im) == Subspace::column_span(&d.mul_ref(dc))
}

/// Checks every invariant of a package, including those of the associated
/// twisted complex over O(SL₂).
pub fn validate_package(p: &KahlerPackage) -> PackageReport {
    let mut ck = Checker::new(p);
    let n = p.dim();
    let a = &p.algebra;
    let alg = validate_algebra(a);
    let failures: Vec<String> = alg.failures.into_iter().filter(|f| !f.starts_with("not connected")).collect();
    ck.flag("algebra laws", failures.is_empty(), Some(failures.join("; ")));
    let h0 = p.harmonic.iter().filter(|v| p.vector_degree(v) == Some(0)).count();
    ck.flag("cohomologically connected", h0 == 1, Some(format!("H⁰ has dimension {h0}")));
    let u = a.unit();
    let mut aug_bad = None;
    for i in (0..n).filter(|&i| i != u) {
        for j in (0..n).filter(|&j| j != u) {
            if a.mul_basis(i, j).get(&u).is_some_and(|c| !c.is_zero()) {
                aug_bad = Some(format!("{}·{} has a unit component", a.basis()[i].label, a.basis()[j].label));
            }
        }
    }
    ck.flag("augmentation multiplicative", aug_bad.is_none(), aug_bad);
    let g_deg = degree_offender(p, &p.gram, 0);
    ck.flag("inner product respects degree", g_deg.is_none(), g_deg);
    let dc_deg = degree_offender(p, &p.dc, 1);
    ck.flag("dᶜ has degree 1", dc_deg.is_none(), dc_deg);
    let l_deg = degree_offender(p, &p.lambda, -2);
    ck.flag("Λ has degree −2", l_deg.is_none(), l_deg);

    let d = &p.d;
    let dc = &p.dc;
    ck.zero("d² = 0", &d.mul_ref(d));
    ck.zero("(dᶜ)² = 0", &dc.mul_ref(dc));
    ck.zero("ddᶜ + dᶜd = 0", &(d.mul_ref(dc) + dc.mul_ref(d)));
    let leib = derivation_offender(p, dc, true);
    ck.flag("dᶜ is a derivation", leib.is_none(), leib);

    match &p.weil {
        Some(c) => {
            let c_deg = degree_offender(p, c, 0);
            ck.flag("C has degree 0", c_deg.is_none(), c_deg);
            ck.equal("dᶜ = [C, d]", dc, &c.commutator(d));
            let cder = derivation_offender(p, c, false);
            ck.flag("C is a derivation", cder.is_none(), cder);
            ck.zero("C is skew-adjoint", &(c.transpose().mul_ref(&p.gram) + p.gram.mul_ref(c)));
            ck.zero("[C, Λ] = 0", &c.commutator(&p.lambda));
            let mut spec_bad = None;
            for k in 0..=a.max_degree() {
                let idx = a.indices_of_degree(k);
                if idx.is_empty() {
                    continue;
                }
                let ck_block = c.submatrix(&idx, &idx);
                let m = idx.len();
                let mut poly = Matrix::identity(m);
                for j in (0..=k as i64).filter(|j| (k as i64 - j) % 2 == 0) {
                    let factor = if j == 0 {
                        ck_block.clone()
                    } else {
                        ck_block.mul_ref(&ck_block) + Matrix::identity(m).scale(&q_int(j * j))
                    };
                    poly = poly.mul_ref(&factor);
                }
                if !poly.is_zero() {
                    spec_bad = Some(format!("degree {k}: C is not semisimple with eigenvalues i(p − q), p + q = {k}"));
                }
            }
            ck.flag("C has eigenvalues i(p − q)", spec_bad.is_none(), spec_bad);
        }
        None => {
            let ok = d.is_zero() && dc.is_zero();
            ck.flag(
                "complex structure",
                ok,
                Some("an operator C is required unless d = dᶜ = 0".into()),
            );
            if a.is_bityped() {
                let mut bad = None;
                for i in 0..n {
                    for j in 0..n {
                        if !p.gram[(i, j)].is_zero() && a.bitype(i) != a.bitype(j) {
                            bad = Some(format!("entry ({i}, {j}) pairs different bitypes"));
                        }
                    }
                }
                ck.flag("inner product orthogonal across bitypes", bad.is_none(), bad);
            }
        }
    }

    let lam = &p.lambda;
    ck.equal("d* = −[Λ, dᶜ]", &p.d_star, &-lam.commutator(dc));
    ck.equal("dᶜ* = [Λ, d]", &p.dc_star, &lam.commutator(d));
    let lap_c = dc.mul_ref(&p.dc_star) + p.dc_star.mul_ref(dc);
    ck.equal("Δ = [dᶜ, dᶜ*]", &p.laplacian, &lap_c);
    ck.flag("principle of two types", two_types_holds(d, dc), Some("ker d ∩ ker dᶜ ∩ (im d + im dᶜ) ≠ im ddᶜ".into()));

    let g = &p.green;
    let id_minus_h = Matrix::identity(n) - p.pr_h.clone();
    ck.equal("GΔ = id − pr_H", &g.mul_ref(&p.laplacian), &id_minus_h);
    ck.equal("ΔG = id − pr_H", &p.laplacian.mul_ref(g), &id_minus_h);
    for (name, m) in [
        ("[G, d] = 0", d),
        ("[G, dᶜ] = 0", dc),
        ("[G, Λ] = 0", lam),
        ("[G, d*] = 0", &p.d_star),
        ("[G, dᶜ*] = 0", &p.dc_star),
    ] {
        ck.zero(name, &g.commutator(m));
    }

    super::twisted::TwistedComplex::new(p).check_into(&mut ck);
    let valid = ck.checks.iter().all(|c| c.passed);
    PackageReport { valid, checks: ck.checks }
}

/// Green's operator: `Δ⁻¹` on the orthogonal complement of the harmonic
/// forms and `0` on them.
pub fn green(p: &KahlerPackage) -> Matrix<Q> {
    p.green.clone()
}

/// Checks the family lemma for `M = (u v; x y)`: the kernels, images and
/// product images of `(d, dᶜ)` and `(ud + vdᶜ, xd + ydᶜ)` agree and the new
/// pair satisfies the principle of two types.
pub fn two_types_family(p: &KahlerPackage, m: [[Q; 2]; 2]) -> Result<bool> {
    let det = m[0][0].mul_ref(&m[1][1]).sub_ref(&m[0][1].mul_ref(&m[1][0]));
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let n = p.dim();
    let (d, dc) = (&p.d, &p.dc);
    let a = d.scale(&m[0][0]) + dc.scale(&m[0][1]);
    let b = d.scale(&m[1][0]) + dc.scale(&m[1][1]);
    let ker = |x: &Matrix<Q>| Subspace::span(n, &x.kernel());
    let im = Subspace::column_span;
    let kernels = ker(d).intersect(&ker(dc)) == ker(&a).intersect(&ker(&b));
    let images = im(d).sum(&im(dc)) == im(&a).sum(&im(&b));
    let products = im(&a.mul_ref(&b)) == im(&d.mul_ref(dc));
    Ok(kernels && images && products && two_types_holds(&a, &b))
}
