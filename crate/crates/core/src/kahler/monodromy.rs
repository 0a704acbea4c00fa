use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::mhs::PolyMatrix;
use crate::rht::{colie_basis, CoLieBasis};
use crate::scalars::{q_int, Field, SL2Elem, Q};

use super::coder::{CoderivationPipeline, LinOp, SlTensor, Word};
use super::twisted::SlOp;
use super::package::KahlerPackage;

/// Cogenerator component of the monodromy on one CoLie basis word.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaComponent {
    /// Word in the indices of the reduced harmonic basis `H̄`.
    pub word: Vec<u16>,
    /// `α(word)` projected to `H̄[1]`, from the transfer pipeline.
    pub alpha: Vec<SL2Elem>,
    /// The same component from the closed formula.
    pub closed: Vec<SL2Elem>,
    /// The base-point term `γ_{x₀}(word)`.
    pub gamma: SL2Elem,
}

/// Monodromy at infinity of the mixed Hodge structure on the relative
/// Malcev homotopy type, as cogenerator components of `α` on `CoLie(H̄[1])`
/// up to a word length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyResult {
    pub n_max: usize,
    /// Labels and degrees of the reduced harmonic basis.
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub components: Vec<AlphaComponent>,
    /// Closed formula and pipeline agree on every component.
    pub closed_matches: bool,
    /// `α` vanishes on words of length 1 and 2.
    pub low_lengths_vanish: bool,
    /// Every term of `α` has `deg(out) + weight = Σ deg(in) − 2`.
    pub s_type: bool,
    pub gamma_vanishes: bool,
}

impl MonodromyResult {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.alpha.iter().all(SL2Elem::is_zero))
    }
}

/// Indices into the harmonic basis of the classes of positive degree.
fn reduced(p: &KahlerPackage) -> Vec<usize> {
    (0..p.harmonic().len()).filter(|&i| p.vector_degree(&p.harmonic()[i]).is_some_and(|d| d > 0)).collect()
}

fn harmonic_label(p: &KahlerPackage, v: &[Q]) -> String {
    let a = p.algebra();
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]] == Q::one() {
        a.basis()[nz[0]].label.clone()
    } else {
        let parts: Vec<String> = nz
            .iter()
            .map(|&i| format!("{}{}", crate::scalars::q_to_string(&v[i]), a.basis()[i].label))
            .collect();
        format!("[{}]", parts.join("+"))
    }
}

/// Evaluation context for `α` on harmonic words.
pub struct Monodromy<'a> {
    package: &'a KahlerPackage,
    pub pipeline: CoderivationPipeline,
    hbar: Vec<usize>,
    /// Position of each harmonic index in `hbar`.
    hbar_pos: Vec<Option<usize>>,
}

impl<'a> Monodromy<'a> {
    pub fn new(p: &'a KahlerPackage) -> Self {
        let hbar = reduced(p);
        let mut hbar_pos = vec![None; p.harmonic().len()];
        for (k, &i) in hbar.iter().enumerate() {
            hbar_pos[i] = Some(k);
        }
        Monodromy { package: p, pipeline: CoderivationPipeline::new(p), hbar, hbar_pos }
    }

    pub fn hbar_degrees(&self) -> Vec<i64> {
        self.hbar.iter().map(|&i| self.package.vector_degree(&self.package.harmonic()[i]).unwrap() as i64).collect()
    }

    /// `s(w)` for a word in `H̄` indices.
    pub fn lift(&self, w: &[u16]) -> SlTensor {
        let hw: Vec<u16> = w.iter().map(|&g| self.hbar[g as usize] as u16).collect();
        self.pipeline.harmonic_word(&hw)
    }

    /// Rewrites a tensor of harmonic forms as words in `H̄` indices; a
    /// component on the unit class is an error.
    pub fn lower(&self, t: &SlTensor) -> Result<SlTensor> {
        let coords = self.pipeline.to_harmonic_coords(t);
        let mut out = SlTensor::zero();
        for (w, c) in coords.terms() {
            let mut w2 = Vec::with_capacity(w.len());
            for &g in w {
                match self.hbar_pos[g as usize] {
                    Some(k) => w2.push(k as u16),
                    None => return Err(Error::IdentityFailed("unit class in a reduced tensor".into())),
                }
            }
            out.add_term(w2, c.clone());
        }
        Ok(out)
    }

    /// `α(s t)` from the transfer pipeline: transfer of `N` along `i`, then
    /// along `p`.
    pub fn alpha_pipeline(&self, t: &SlTensor) -> SlTensor {
        let pl = &self.pipeline;
        let f = |x: &SlTensor| pl.n_on_z_to_h(x);
        pl.transfer_gamma_p(&f, t).value
    }

    /// `α(s t)` from the closed formula.
    pub fn alpha_closed(&self, t: &SlTensor) -> SlTensor {
        self.alpha_closed_terms(t).into_iter().fold(SlTensor::zero(), |acc, x| acc.add(&x))
    }

    /// The summands of the closed formula grouped by the number `a` of
    /// factors `dᶜX`, sign included.
    pub fn alpha_closed_terms(&self, t: &SlTensor) -> Vec<SlTensor> {
        let pl = &self.pipeline;
        let x_op = |x: &SlTensor| pl.q_bracket_even(&pl.g_lambda, x);
        let qi = |x: &SlTensor| pl.q_bracket_even(&pl.g2_dd, &pl.coder(&pl.dc, x));
        let mut parts = Vec::new();
        let mut pa = t.clone();
        let mut a = 0usize;
        while !pa.is_zero() {
            let mut out = SlTensor::zero();
            let mut cur = qi(&pl.coder(&pl.d, &x_op(&pa)));
            let mut b = 1usize;
            while !cur.is_zero() {
                let term = pl.morph(&pl.pr_h, &cur);
                out = if (a + b) % 2 == 0 { out.add(&term) } else { out.sub(&term) };
                cur = qi(&cur);
                b += 1;
            }
            if a > 0 {
                let mut cur = qi(&pl.coder(&pl.d, &pl.coder(&pl.g_lambda, &pa)));
                let mut b = 1usize;
                while !cur.is_zero() {
                    let term = pl.q_h(&pl.morph(&pl.pr_h, &cur)).sub(&pl.morph(&pl.pr_h, &pl.q(&cur)));
                    out = if (a + b + 1) % 2 == 0 { out.add(&term) } else { out.sub(&term) };
                    cur = qi(&cur);
                    b += 1;
                }
            }
            parts.push(out);
            pa = pl.coder(&pl.dc, &x_op(&pa));
            a += 1;
        }
        parts
    }

    /// `γ_{x₀}(s t)` from the closed formula: the unit coordinate of the
    /// length-one part.
    pub fn gamma_closed(&self, t: &SlTensor) -> SL2Elem {
        let pl = &self.pipeline;
        let x_op = |x: &SlTensor| pl.q_bracket_even(&pl.g_lambda, x);
        let qi = |x: &SlTensor| pl.q_bracket_even(&pl.g2_dd, &pl.coder(&pl.dc, x));
        let mut total = SlTensor::zero();
        let mut pa = t.clone();
        let mut a = 0usize;
        while !pa.is_zero() {
            let mut cur = pl.coder(&pl.d, &x_op(&pa));
            let mut b = 0usize;
            while !cur.is_zero() {
                let term = pl.coder(&pl.h_i, &cur);
                total = if (a + b + 1) % 2 == 0 { total.add(&term) } else { total.sub(&term) };
                cur = qi(&cur);
                b += 1;
            }
            if a > 0 {
                let mut cur = qi(&pl.coder(&pl.d, &pl.coder(&pl.g_lambda, &pa)));
                let mut b = 1usize;
                while !cur.is_zero() {
                    total = if (a + b + 1) % 2 == 0 { total.add(&cur) } else { total.sub(&cur) };
                    cur = qi(&cur);
                    b += 1;
                }
            }
            pa = pl.coder(&pl.dc, &x_op(&pa));
            a += 1;
        }
        self.unit_coordinate(&total)
    }

    fn unit_coordinate(&self, t: &SlTensor) -> SL2Elem {
        let u = self.pipeline.unit() as u16;
        t.terms().get(&vec![u]).cloned().unwrap_or_default()
    }

    /// Length-one component in `H̄` coordinates.
    fn cogenerator(&self, t: &SlTensor) -> Result<Vec<SL2Elem>> {
        let low = self.lower(&t.length_component(1))?;
        let mut v = vec![SL2Elem::zero(); self.hbar.len()];
        for (w, c) in low.terms() {
            v[w[0] as usize] = c.clone();
        }
        Ok(v)
    }
}

/// Computes `α` and `γ_{x₀}` on every CoLie basis word of `H̄[1]` of length
/// at most `n_max`, by the transfer pipeline and by the closed formula.
pub fn monodromy(p: &KahlerPackage, n_max: usize) -> Result<MonodromyResult> {
    if n_max < 2 {
        return Err(Error::Truncation("word length must be at least 2".into()));
    }
    let m = Monodromy::new(p);
    let degrees = m.hbar_degrees();
    let shifted: Vec<i64> = degrees.iter().map(|d| d - 1).collect();
    let labels = m.hbar.iter().map(|&i| harmonic_label(p, &p.harmonic()[i])).collect();
    let mut components = Vec::new();
    let mut closed_matches = true;
    let mut low_lengths_vanish = true;
    let mut s_type = true;
    let mut gamma_vanishes = true;
    for n in 1..=n_max {
        let basis = colie_basis(&shifted, n);
        for w in &basis.words {
            let t = m.lift(w);
            let full = m.alpha_pipeline(&t);
            let closed_full = m.alpha_closed(&t);
            let alpha = m.cogenerator(&full)?;
            let closed = m.cogenerator(&closed_full)?;
            let gamma_pipe = m.unit_coordinate(&m.pipeline.gamma_n(&t));
            let gamma = m.gamma_closed(&t);
            if alpha != closed {
                closed_matches = false;
            }
            if n <= 2 && alpha.iter().any(|c| !c.is_zero()) {
                low_lengths_vanish = false;
            }
            let din: i64 = w.iter().map(|&g| degrees[g as usize]).sum();
            for (k, c) in alpha.iter().enumerate() {
                if c.terms().any(|(mono, _)| degrees[k] + mono.weight() != din - 2) {
                    s_type = false;
                }
            }
            if !gamma.is_zero() || !gamma_pipe.is_zero() {
                gamma_vanishes = false;
            }
            components.push(AlphaComponent { word: w.clone(), alpha, closed, gamma });
        }
    }
    Ok(MonodromyResult { n_max, labels, degrees, components, closed_matches, low_lengths_vanish, s_type, gamma_vanishes })
}

/// The complex `(CoLie^{≤N}(H̄[1]), q_H)` in one shifted degree, with bases
/// of cocycles modulo coboundaries.
struct DegreePiece {
    /// `(length, word)` for every basis vector of the degree.
    words: Vec<(usize, Word)>,
    bases: Vec<CoLieBasis>,
}

impl DegreePiece {
    fn new(shifted: &[i64], degree: i64, n_max: usize) -> Self {
        let mut words = Vec::new();
        let mut bases = Vec::new();
        for n in 1..=n_max {
            let b = colie_basis(shifted, n);
            for w in &b.words {
                let deg: i64 = w.iter().map(|&g| shifted[g as usize]).sum();
                if deg == degree {
                    words.push((n, w.clone()));
                }
            }
            bases.push(b);
        }
        DegreePiece { words, bases }
    }

    fn dim(&self) -> usize {
        self.words.len()
    }

    /// Coordinates of a tensor (words in `H̄` indices, this degree) after the
    /// shuffle quotient, one rational vector per ring coefficient.
    fn project(&self, t: &SlTensor) -> Vec<SL2Elem> {
        let mut out = vec![SL2Elem::zero(); self.dim()];
        for (w, c) in t.terms() {
            let n = w.len();
            if n == 0 || n > self.bases.len() {
                continue;
            }
            let basis = &self.bases[n - 1];
            let proj: SparseVec<Q> = basis.project(w);
            for (i, a) in proj {
                let bw = &basis.words[i];
                if let Some(pos) = self.words.iter().position(|(l, x)| *l == n && x == bw) {
                    out[pos] = out[pos].add_ref(&c.scale(&a));
                }
            }
        }
        out
    }
}

/// Restriction of the monodromy to `S = {(1, 0; x, 1)}` acting on the dual
/// of `π_n`, and the resulting mixed Hodge structure as the kernel of
/// `β + N` on `(gr π_n)^∨ ⊗ ℚ[x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SRestriction {
    pub n: usize,
    /// Cohomology representatives, as coordinates in CoLie words of `H̄`.
    pub classes: Vec<Vec<(Vec<u16>, Q)>>,
    /// `B(x)`: the monodromy on classes, column `j` the image of class `j`.
    pub matrix: PolyMatrix,
    /// Columns are a basis of the kernel of `f ↦ f' + B f` over ℚ.
    pub solutions: PolyMatrix,
    pub split: bool,
    /// Degree-one classes make the word-length truncation visible.
    pub truncated: bool,
}

fn integrate(m: &PolyMatrix) -> PolyMatrix {
    let mut coeffs = vec![Matrix::zeros(m.rows(), m.cols())];
    for (k, c) in m.coeffs().iter().enumerate() {
        coeffs.push(c.scale(&Q::new(1.into(), ((k + 1) as i64).into())));
    }
    PolyMatrix::new(m.rows(), m.cols(), coeffs)
}

/// Computes `(π_n)^∨` from the monodromy: classes of `H^{n−1}` of the
/// reduced CoLie complex, the matrix `B(x)` of `α` restricted to `S`, and a
/// basis of the kernel of `β ⊗ id + id ⊗ d/dx`.
pub fn restrict_to_s(p: &KahlerPackage, n: usize, n_max: usize) -> Result<SRestriction> {
    if n < 2 {
        return Err(Error::Invalid("homotopy degree must be at least 2".into()));
    }
    let m = Monodromy::new(p);
    let degrees = m.hbar_degrees();
    let shifted: Vec<i64> = degrees.iter().map(|d| d - 1).collect();
    let target = n as i64 - 1;
    let pieces: Vec<DegreePiece> = (target - 1..=target + 1).map(|d| DegreePiece::new(&shifted, d, n_max)).collect();
    let q_matrix = |from: &DegreePiece, to: &DegreePiece| -> Result<Matrix<Q>> {
        let mut cols = Vec::new();
        for (_, w) in &from.words {
            let image = m.lower(&m.pipeline.q_h(&m.lift(w)))?;
            let v = to.project(&image);
            cols.push(v.iter().map(|c| c.eval(&[Q::one(), Q::zero(), Q::zero(), Q::one()])).collect::<Vec<Q>>());
        }
        Ok(Matrix::from_cols(&cols, to.dim()))
    };
    let (prev, cur, next) = (&pieces[0], &pieces[1], &pieces[2]);
    let d_in = q_matrix(prev, cur)?;
    let d_out = q_matrix(cur, next)?;
    let dim = cur.dim();
    let cocycles = Subspace::span(dim, &d_out.kernel());
    let boundaries = Subspace::column_span(&d_in);
    let reps = cocycles.complement_in(&boundaries);
    let k = reps.len();
    // Coordinates modulo boundaries: solve [reps | boundaries] c = v.
    let mut basis_cols = reps.clone();
    basis_cols.extend(boundaries.basis().iter().cloned());
    let basis_matrix = Matrix::from_cols(&basis_cols, dim);
    let mut by_power: Vec<Matrix<Q>> = Vec::new();
    for (j, r) in reps.iter().enumerate() {
        let mut t = SlTensor::zero();
        for (i, c) in r.iter().enumerate() {
            if !c.is_zero() {
                t = t.add(&m.lift(&cur.words[i].1).scale_q(c));
            }
        }
        if !m.unit_coordinate(&m.pipeline.gamma_n(&t)).is_zero() {
            return Err(Error::Invalid("base-point term does not vanish".into()));
        }
        let image = m.lower(&m.alpha_pipeline(&t))?;
        let coords = cur.project(&image);
        let polys: Vec<_> = coords.iter().map(SL2Elem::restrict_to_s).collect();
        let top = polys.iter().filter_map(|p| p.degree()).max();
        if let Some(top) = top {
            while by_power.len() <= top {
                by_power.push(Matrix::zeros(k, k));
            }
            for (pw, slot) in by_power.iter_mut().enumerate().take(top + 1) {
                let v: Vec<Q> = polys.iter().map(|p| p.coeff(pw)).collect();
                if v.iter().all(Field::is_zero) {
                    continue;
                }
                let sol = basis_matrix
                    .solve(&v)
                    .ok_or_else(|| Error::IdentityFailed("monodromy image is not a cocycle".into()))?;
                for i in 0..k {
                    slot[(i, j)] = sol[i].clone();
                }
            }
        }
    }
    let b = PolyMatrix::new(k, k, by_power);
    // f = Σ (−∫B)^j v
    let mut term = PolyMatrix::identity(k);
    let mut sum = term.clone();
    for _ in 0..=k + 1 {
        let next = integrate(&b.mul_ref(&term));
        term = PolyMatrix::new(k, k, next.coeffs().iter().map(|c| -c.clone()).collect());
        if term.coeffs().is_empty() {
            break;
        }
        sum = sum.add_ref(&term);
    }
    if !term.coeffs().is_empty() {
        return Err(Error::IdentityFailed("monodromy is not nilpotent on the classes".into()));
    }
    let classes = reps
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (cur.words[i].1.clone(), c.clone())).collect())
        .collect();
    let truncated = shifted.contains(&0);
    let split = b.coeffs().is_empty();
    Ok(SRestriction { n, classes, matrix: b, solutions: sum, split, truncated })
}

/// The graded pieces of `(π₄)^∨` of a simply connected package and the
/// extension datum `α′: K → C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pi4Structure {
    /// Basis of `C = coker(Sym²H² → H⁴)`, as harmonic coordinates in `H⁴`.
    pub c_basis: Vec<Vec<Q>>,
    /// Basis of `L = ker(H² ⊗ H³ → H⁵)`, as coefficients of `H²_i ⊗ H³_j`.
    pub l_basis: Vec<Vec<Q>>,
    /// Basis of `K = ker(q: V → H⁴ ⊗ H²)` with `V = CoLie³(H²[1])`.
    pub k_basis: Vec<Vec<Q>>,
    pub v_words: Vec<Word>,
    /// `α′` on `K`, in the bases above.
    pub alpha: Matrix<Q>,
    /// The literal six-term expression in the same bases.
    pub six_term: Matrix<Q>,
}

impl Pi4Structure {
    pub fn split(&self) -> bool {
        self.alpha.is_zero()
    }
}

/// `π₄` data from the harmonic classes in degrees 2 to 5.
pub fn pi4_structure(p: &KahlerPackage) -> Result<Pi4Structure> {
    let m = Monodromy::new(p);
    let degrees = m.hbar_degrees();
    let of_degree = |k: i64| -> Vec<usize> { (0..degrees.len()).filter(|&i| degrees[i] == k).collect() };
    if !of_degree(1).is_empty() {
        return Err(Error::Invalid("π₄ data needs H¹ = 0".into()));
    }
    let (h2, h3, h4, h5) = (of_degree(2), of_degree(3), of_degree(4), of_degree(5));
    let pl = &m.pipeline;
    let at_one = |c: &SL2Elem| c.eval(&[Q::one(), Q::zero(), Q::zero(), Q::one()]);
    // Length-one part of a reduced tensor, in the coordinates `idx`.
    let coords_in = |t: &SlTensor, idx: &[usize]| -> Result<Vec<Q>> {
        let low = m.lower(&t.length_component(1))?;
        Ok(idx.iter().map(|&i| low.terms().get(&vec![i as u16]).map(at_one).unwrap_or_else(Q::zero)).collect())
    };
    let cup = |i: usize, j: usize| pl.q_h(&m.lift(&[i as u16, j as u16]));
    let mut sym = Vec::new();
    for &i in &h2 {
        for &j in &h2 {
            sym.push(coords_in(&cup(i, j), &h4)?);
        }
    }
    let image = Subspace::span(h4.len(), &sym);
    let c_basis = Subspace::full(h4.len()).complement_in(&image);
    let mut c_cols = c_basis.clone();
    c_cols.extend(image.basis().iter().cloned());
    let c_matrix = Matrix::from_cols(&c_cols, h4.len());
    let to_c = |v: &[Q]| -> Vec<Q> {
        let sol = c_matrix.solve(v).expect("basis of H⁴");
        sol[..c_basis.len()].to_vec()
    };
    let mut cups = Vec::new();
    for &i in &h2 {
        for &j in &h3 {
            cups.push(coords_in(&cup(i, j), &h5)?);
        }
    }
    let l_basis = if cups.is_empty() { Vec::new() } else { Matrix::from_cols(&cups, h5.len()).kernel() };
    let v_words: Vec<Word> = colie_basis(&vec![1; h2.len()], 3)
        .words
        .into_iter()
        .map(|w| w.iter().map(|&g| h2[g as usize] as u16).collect())
        .collect();
    let shifted: Vec<i64> = degrees.iter().map(|d| d - 1).collect();
    let pairs = colie_basis(&shifted, 2);
    let mut q_cols = Vec::new();
    for w in &v_words {
        let image = m.lower(&pl.q_h(&m.lift(w)))?;
        let mut v = vec![Q::zero(); pairs.dim()];
        for (word, c) in image.terms() {
            for (i, a) in pairs.project(word) {
                v[i] = v[i].add_ref(&at_one(c).mul_ref(&a));
            }
        }
        q_cols.push(v);
    }
    let k_basis = if v_words.is_empty() { Vec::new() } else { Matrix::from_cols(&q_cols, pairs.dim()).kernel() };
    let kernel_tensor = |kv: &[Q]| -> SlTensor {
        let mut t = SlTensor::zero();
        for (i, c) in kv.iter().enumerate() {
            if !c.is_zero() {
                t = t.add(&m.lift(&v_words[i]).scale_q(c));
            }
        }
        t
    };
    let evaluate = |f: &dyn Fn(&SlTensor) -> SlTensor| -> Result<Matrix<Q>> {
        let mut cols = Vec::new();
        for kv in &k_basis {
            cols.push(to_c(&coords_in(&f(&kernel_tensor(kv)), &h4)?));
        }
        Ok(Matrix::from_cols(&cols, c_basis.len()))
    };
    let alpha = evaluate(&|t| example_alpha(p, pl, t))?;
    let six_term = evaluate(&|t| six_term_alpha(p, t))?;
    Ok(Pi4Structure { c_basis, l_basis, k_basis, v_words, alpha, six_term })
}

/// `pr_H ∘ q ∘ pr_I ∘ [q, GΛ] ∘ s` on length-three words. `pr_I` is the
/// orthogonal projection onto `im(d*dᶜ*)`, extended to tensors factorwise
/// together with `pr_H` so that harmonic factors pass through. The sign is
/// the one produced by the transfer.
pub fn example_alpha(p: &KahlerPackage, pl: &CoderivationPipeline, t: &SlTensor) -> SlTensor {
    let x = pl.q_bracket_even(&pl.g_lambda, t);
    let pr_i = LinOp::new(&SlOp::constant(p.pr_i() + p.pr_h().clone()), 0);
    pl.morph(&pl.pr_h, &pl.q(&pl.morph(&pr_i, &x))).neg()
}

/// The six-term expression for `α′(a ⊗ b ⊗ c)` read literally, with `GΛ`
/// applied to the individual harmonic representatives.
pub fn six_term_alpha(p: &KahlerPackage, t: &SlTensor) -> SlTensor {
    let gl = p.green().mul_ref(p.lambda());
    let pr_i = p.pr_i();
    let n = p.dim();
    let mut out = vec![Q::zero(); n];
    for (w, c) in t.terms() {
        if w.len() != 3 {
            continue;
        }
        let c = c.eval(&[Q::one(), Q::zero(), Q::zero(), Q::one()]);
        let e = |i: usize| -> Vec<Q> {
            let mut v = vec![Q::zero(); n];
            v[w[i] as usize] = Q::one();
            v
        };
        let (a, b, cc) = (e(0), e(1), e(2));
        let gla = gl.mul_vec(&a);
        let glb = gl.mul_vec(&b);
        let glc = gl.mul_vec(&cc);
        let pi = |v: &[Q]| pr_i.mul_vec(v);
        let m = |x: &[Q], y: &[Q]| p.product(x, y);
        let terms: [(i64, Vec<Q>); 6] = [
            (1, m(&pi(&m(&gla, &b)), &cc)),
            (-1, m(&pi(&gla), &m(&b, &cc))),
            (-1, m(&pi(&m(&a, &glb)), &cc)),
            (-1, m(&a, &pi(&m(&glb, &cc)))),
            (-1, m(&m(&a, &b), &pi(&glc))),
            (1, m(&a, &pi(&m(&b, &glc)))),
        ];
        for (s, v) in terms {
            let v = p.pr_h().mul_vec(&v);
            for i in 0..n {
                out[i] = out[i].add_ref(&v[i].mul_ref(&c).mul_ref(&q_int(s)));
            }
        }
    }
    let mut res = SlTensor::zero();
    for (i, c) in out.into_iter().enumerate() {
        if !c.is_zero() {
            res.add_term(vec![i as u16], SL2Elem::constant(c));
        }
    }
    res
}
