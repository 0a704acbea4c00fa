use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Field, Mono, Poly, RatFunc, SL2Elem, Q};

use super::package::{Checker, KahlerPackage};

/// O(SL₂)-linear operator on `A ⊗ O(SL₂)`, written as `Σ mᵢ·Mᵢ` over normal
/// monomials `mᵢ` with constant matrices `Mᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlOp {
    rows: usize,
    cols: usize,
    terms: BTreeMap<Mono, Matrix<Q>>,
}

impl SlOp {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SlOp { rows, cols, terms: BTreeMap::new() }
    }

    pub fn constant(m: Matrix<Q>) -> Self {
        SlOp::scaled(&SL2Elem::one(), &m)
    }

    pub fn identity(n: usize) -> Self {
        SlOp::constant(Matrix::identity(n))
    }

    /// `c·M` for a ring element `c`.
    pub fn scaled(c: &SL2Elem, m: &Matrix<Q>) -> Self {
        let mut out = SlOp::zero(m.rows(), m.cols());
        for (mono, a) in c.terms() {
            out.add_term(*mono, m.scale(a));
        }
        out
    }

    fn add_term(&mut self, mono: Mono, m: Matrix<Q>) {
        let next = match self.terms.remove(&mono) {
            Some(old) => old + m,
            None => m,
        };
        if !next.is_zero() {
            self.terms.insert(mono, next);
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Matrix<Q>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &SlOp) -> SlOp {
        let mut out = self.clone();
        for (m, a) in &o.terms {
            out.add_term(*m, a.clone());
        }
        out
    }

    pub fn sub(&self, o: &SlOp) -> SlOp {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SlOp {
        SlOp { rows: self.rows, cols: self.cols, terms: self.terms.iter().map(|(m, a)| (*m, -a.clone())).collect() }
    }

    pub fn scale(&self, c: &SL2Elem) -> SlOp {
        SlOp::scaled(c, &Matrix::identity(self.rows)).compose(self)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &SlOp) -> SlOp {
        assert_eq!(self.cols, o.rows, "composition shape");
        let mut out = SlOp::zero(self.rows, o.cols);
        for (m1, a) in &self.terms {
            for (m2, b) in &o.terms {
                let ab = a.mul_ref(b);
                if ab.is_zero() {
                    continue;
                }
                let prod = SL2Elem::term(*m1, Q::one()).mul_ref(&SL2Elem::term(*m2, Q::one()));
                for (m, c) in prod.terms() {
                    out.add_term(*m, ab.scale(c));
                }
            }
        }
        out
    }

    /// `self ∘ o − (−1)^{ab} o ∘ self`.
    pub fn graded_commutator(&self, deg_a: i64, o: &SlOp, deg_b: i64) -> SlOp {
        let ab = self.compose(o);
        let ba = o.compose(self);
        if (deg_a * deg_b).rem_euclid(2) == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    pub fn apply(&self, v: &[SL2Elem]) -> Vec<SL2Elem> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![SL2Elem::zero(); self.rows];
        for (mono, a) in &self.terms {
            let mono = SL2Elem::term(*mono, Q::one());
            for j in 0..self.cols {
                if v[j].is_zero() {
                    continue;
                }
                let mv = mono.mul_ref(&v[j]);
                for (i, slot) in out.iter_mut().enumerate() {
                    if !a[(i, j)].is_zero() {
                        *slot = slot.add_ref(&mv.scale(&a[(i, j)]));
                    }
                }
            }
        }
        out
    }

    /// Coefficientwise action of the nilpotent derivation `N`.
    pub fn n_derive(&self) -> SlOp {
        let mut out = SlOp::zero(self.rows, self.cols);
        for (m, a) in &self.terms {
            out = out.add(&SlOp::scaled(&SL2Elem::term(*m, Q::one()).n_derive(), a));
        }
        out
    }

    /// Specialization at a point `(u, v, x, y)` over any field.
    pub fn eval_in<F: Field>(&self, p: &[F; 4]) -> Matrix<F> {
        let mut out = Matrix::<F>::zeros(self.rows, self.cols);
        for (m, a) in &self.terms {
            let mut c = F::one();
            for (e, val) in m.0.iter().zip(p.iter()) {
                for _ in 0..*e {
                    c = c.mul_ref(val);
                }
            }
            out = out + a.map(|q| F::from_q(q).mul_ref(&c));
        }
        out
    }

    pub fn eval(&self, p: &[Q; 4]) -> Matrix<Q> {
        self.eval_in(p)
    }

    /// The entry in row `i`, column `j` as a ring element.
    pub fn entry(&self, i: usize, j: usize) -> SL2Elem {
        SL2Elem::normalize(self.terms.iter().map(|(m, a)| (*m, a[(i, j)].clone())))
    }
}

/// The twisted complex `(A ⊗ O(SL₂), D̃ = u d + v dᶜ)` with the companion
/// `D̃ᶜ = x d + y dᶜ`, the projection onto `Z = ker D̃ᶜ` and the two
/// homotopies used for homotopy transfer.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub d: SlOp,
    pub dc: SlOp,
    pub d_star: SlOp,
    pub dc_star: SlOp,
    pub green: SlOp,
    pub lambda: SlOp,
    pub pr_h: SlOp,
    /// `pr_H + D̃ᶜ G D̃ᶜ*`, the orthogonal projection onto `Z`.
    pub pr_z: SlOp,
    /// `G² d* dᶜ* D̃ᶜ`.
    pub h_i: SlOp,
    /// `G D̃*`.
    pub h_p: SlOp,
    /// `G Λ`, the operator with `h_p = D̃ᶜ G Λ` on `Z`.
    pub g_lambda: SlOp,
    /// `G² d* dᶜ*`, the factor of `h_i` before `D̃ᶜ`.
    pub g2_dd: SlOp,
    const_d: Matrix<Q>,
    const_dc: Matrix<Q>,
    const_d_star: Matrix<Q>,
    const_dc_star: Matrix<Q>,
}

impl TwistedComplex {
    pub fn new(p: &KahlerPackage) -> Self {
        let (u, v, x, y) = (SL2Elem::u(), SL2Elem::v(), SL2Elem::x(), SL2Elem::y());
        let comb = |a: &SL2Elem, m1: &Matrix<Q>, b: &SL2Elem, m2: &Matrix<Q>| SlOp::scaled(a, m1).add(&SlOp::scaled(b, m2));
        let d = comb(&u, p.d(), &v, p.dc());
        let dc = comb(&x, p.d(), &y, p.dc());
        let d_star = comb(&y, p.d_star(), &-x.clone(), p.dc_star());
        let dc_star = comb(&u, p.dc_star(), &-v.clone(), p.d_star());
        let green = SlOp::constant(p.green().clone());
        let lambda = SlOp::constant(p.lambda().clone());
        let pr_h = SlOp::constant(p.pr_h().clone());
        let pr_z = pr_h.add(&dc.compose(&green).compose(&dc_star));
        let g2_dd = SlOp::constant(p.green().mul_ref(p.green()).mul_ref(p.d_star()).mul_ref(p.dc_star()));
        let h_i = g2_dd.compose(&dc);
        let h_p = green.compose(&d_star);
        let g_lambda = green.compose(&lambda);
        TwistedComplex {
            d,
            dc,
            d_star,
            dc_star,
            green,
            lambda,
            pr_h,
            pr_z,
            h_i,
            h_p,
            g_lambda,
            g2_dd,
            const_d: p.d().clone(),
            const_dc: p.dc().clone(),
            const_d_star: p.d_star().clone(),
            const_dc_star: p.dc_star().clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d.rows()
    }

    pub(crate) fn check_into(&self, ck: &mut Checker<'_>) {
        let n = self.dim();
        let id = SlOp::identity(n);
        let mut eq = |name: &str, a: &SlOp, b: &SlOp| {
            let diff = a.sub(b);
            let detail = diff.terms().iter().next().and_then(|(m, mat)| {
                let z = Matrix::zeros(n, n);
                mat.first_difference(&z).map(|(i, j)| format!("coefficient of {m:?} at ({i}, {j})"))
            });
            ck.flag(name, diff.is_zero(), detail);
        };
        let zero = SlOp::zero(n, n);
        eq("D̃² = 0", &self.d.compose(&self.d), &zero);
        eq("(D̃ᶜ)² = 0", &self.dc.compose(&self.dc), &zero);
        eq("D̃D̃ᶜ + D̃ᶜD̃ = 0", &self.d.graded_commutator(1, &self.dc, 1), &zero);
        eq("D̃D̃ᶜ = ddᶜ", &self.d.compose(&self.dc), &SlOp::constant(self.const_d.mul_ref(&self.const_dc)));
        eq("D̃* = −[Λ, D̃ᶜ]", &self.d_star, &self.lambda.graded_commutator(-2, &self.dc, 1).neg());
        eq("D̃ᶜ* = [Λ, D̃]", &self.dc_star, &self.lambda.graded_commutator(-2, &self.d, 1));
        eq(
            "D̃*D̃ᶜ* = d*dᶜ*",
            &self.d_star.compose(&self.dc_star),
            &SlOp::constant(self.const_d_star.mul_ref(&self.const_dc_star)),
        );
        eq("[D̃, D̃ᶜ*] = 0", &self.d.graded_commutator(1, &self.dc_star, -1), &zero);
        eq("pr_Z² = pr_Z", &self.pr_z.compose(&self.pr_z), &self.pr_z);
        eq("D̃ᶜ pr_Z = 0", &self.dc.compose(&self.pr_z), &zero);
        eq("pr_Z = id − D̃ᶜ*GD̃ᶜ", &self.pr_z, &id.sub(&self.dc_star.compose(&self.green).compose(&self.dc)));
        eq("[D̃, pr_Z] = 0", &self.d.graded_commutator(1, &self.pr_z, 0), &zero);
        eq(
            "id = pr_Z + D̃h_i + h_iD̃",
            &id,
            &self.pr_z.add(&self.d.graded_commutator(1, &self.h_i, -1)),
        );
        eq("h_i pr_Z = 0", &self.h_i.compose(&self.pr_z), &zero);
        eq("pr_Z h_i = 0", &self.pr_z.compose(&self.h_i), &zero);
        eq("h_i² = 0", &self.h_i.compose(&self.h_i), &zero);
        let on_z = |o: &SlOp| o.compose(&self.pr_z);
        eq(
            "[h_p, D̃] = id − pr_H on Z",
            &on_z(&self.h_p.graded_commutator(-1, &self.d, 1)),
            &on_z(&id.sub(&self.pr_h)),
        );
        eq("h_p preserves Z", &self.pr_z.compose(&on_z(&self.h_p)), &on_z(&self.h_p));
        eq("h_p = D̃ᶜGΛ on Z", &on_z(&self.h_p), &on_z(&self.dc.compose(&self.g_lambda)));
        eq("h_p² = 0", &self.h_p.compose(&self.h_p), &zero);
        eq("h_p pr_H = 0", &self.h_p.compose(&self.pr_h), &zero);
        eq("N D̃ = 0", &self.d.n_derive(), &zero);
        eq("N D̃ᶜ = D̃", &self.dc.n_derive(), &self.d);
    }
}

/// Ranks recorded by [`formality_zigzag`] at one point of SL₂.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagPoint {
    pub label: String,
    pub dim_h: usize,
    pub dim_h_twisted: usize,
    pub dim_h_z: usize,
    pub rank_i: usize,
    pub rank_p: usize,
}

impl ZigzagPoint {
    pub fn quasi_isomorphic(&self) -> bool {
        self.dim_h_twisted == self.dim_h
            && self.dim_h_z == self.dim_h
            && self.rank_i == self.dim_h
            && self.rank_p == self.dim_h
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagReport {
    pub points: Vec<ZigzagPoint>,
    pub holds: bool,
}

/// Rank of `H(f): H(C, dc) → H(D, dd)` for a chain map `f`.
fn induced_rank<F: Field>(f: &Matrix<F>, dc: &Matrix<F>, dd: &Matrix<F>) -> usize {
    let cycles = Subspace::span(f.cols(), &dc.kernel());
    let boundaries = Subspace::column_span(dd);
    let img = cycles.image(f).sum(&boundaries);
    img.dim() - boundaries.dim()
}

fn cohomology_dim<F: Field>(d: &Matrix<F>) -> usize {
    d.cols() - 2 * d.rank()
}

fn zigzag_at<F: Field>(tw: &TwistedComplex, dim_h: usize, label: String, p: &[F; 4]) -> ZigzagPoint {
    let d = tw.d.eval_in(p);
    let dc = tw.dc.eval_in(p);
    let pr_h = tw.pr_h.eval_in(p);
    let z = Subspace::span(d.cols(), &dc.kernel());
    let bz = z.matrix();
    // D̃ restricted to Z, in the canonical basis of Z.
    let dz = if bz.cols() == 0 {
        Matrix::zeros(0, 0)
    } else {
        bz.solve_matrix(&d.mul_ref(&bz)).expect("Z is a subcomplex")
    };
    let h0 = Matrix::<F>::zeros(pr_h.rows(), pr_h.rows());
    ZigzagPoint {
        label,
        dim_h,
        dim_h_twisted: cohomology_dim(&d),
        dim_h_z: cohomology_dim(&dz),
        rank_i: induced_rank(&bz, &dz, &d),
        rank_p: induced_rank(&pr_h.mul_ref(&bz), &dz, &h0),
    }
}

/// Checks that `(A, D̃) ← (Z, D̃) → (H, 0)` are quasi-isomorphisms at the
/// generic point of a rational curve in SL₂ and at several rational points.
pub fn formality_zigzag(p: &KahlerPackage) -> ZigzagReport {
    formality_zigzag_at(p, &[]).expect("built-in points lie on SL₂")
}

/// [`formality_zigzag`] with additional points `(u, v, x, y)`, which must
/// satisfy `uy − vx = 1`.
pub fn formality_zigzag_at(p: &KahlerPackage, extra: &[[Q; 4]]) -> Result<ZigzagReport> {
    for pt in extra {
        if pt[0].mul_ref(&pt[3]).sub_ref(&pt[1].mul_ref(&pt[2])) != Q::one() {
            return Err(Error::Invalid(format!("point {pt:?} is not in SL₂")));
        }
    }
    let tw = TwistedComplex::new(p);
    let dim_h = p.harmonic().len();
    let t = RatFunc::t();
    let one = RatFunc::one();
    let curve = [
        one.clone() + t.clone(),
        t.clone() * t.clone(),
        one.clone(),
        RatFunc::new(Poly::new(vec![Q::one(), Q::zero(), Q::one()]), Poly::new(vec![Q::one(), Q::one()])),
    ];
    let mut points = vec![zigzag_at(&tw, dim_h, "generic".into(), &curve)];
    let q = |n: i64| Q::from_i64(n);
    let mut rational: Vec<(String, [Q; 4])> = vec![("identity".into(), [q(1), q(0), q(0), q(1)])];
    for x0 in [-2, 1, 3] {
        rational.push((format!("S({x0})"), [q(1), q(0), q(x0), q(1)]));
    }
    rational.push(("rotation".into(), [q(0), q(1), q(-1), q(0)]));
    rational.push(("(2 3; 1 2)".into(), [q(2), q(3), q(1), q(2)]));
    for pt in extra {
        let label = format!("({})", pt.iter().map(crate::scalars::q_to_string).collect::<Vec<_>>().join(", "));
        rational.push((label, pt.clone()));
    }
    for (label, pt) in rational {
        points.push(zigzag_at(&tw, dim_h, label, &pt));
    }
    let holds = points.iter().all(ZigzagPoint::quasi_isomorphic);
    Ok(ZigzagReport { points, holds })
}
