use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_opposedness, graded_pieces_for, MixedStructure, PolyMatrix, StructureKind};
use crate::error::{Error, Result};
use crate::filt::Filtration;
use crate::linalg::{Matrix, SparseEchelon, SparseVec, Subspace};
use crate::scalars::{q_int, q_parse, q_to_string, Field, Gauss, Poly, Q};

/// An 𝒮-splitting `φ: (gr^W V) ⊗ 𝒮 → V ⊗ 𝒮`.
///
/// `gr^W V` is identified with `V` through `lifts`: column `j` is a vector of
/// weight `weights[j]` whose class spans part of `gr^W_{weights[j]}`. The
/// matrix `phi` is written in the standard coordinates of `V` (rows) against
/// these graded coordinates (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingCertificate {
    pub lifts: Matrix<Q>,
    pub weights: Vec<i64>,
    pub phi: PolyMatrix,
}

impl SplittingCertificate {
    /// Certificate for `M` from one for `M.change_basis(p)`.
    pub fn pull_back(&self, p: &Matrix<Q>) -> Result<Self> {
        let pinv = p.inverse().ok_or(Error::Singular)?;
        Ok(SplittingCertificate {
            lifts: pinv.mul_ref(&self.lifts),
            weights: self.weights.clone(),
            phi: PolyMatrix::constant(pinv).mul_ref(&self.phi),
        })
    }

    /// `φ ∘ g` for an automorphism `g` of `(gr^W V) ⊗ 𝒮`.
    pub fn compose(&self, g: &PolyMatrix) -> Self {
        SplittingCertificate { lifts: self.lifts.clone(), weights: self.weights.clone(), phi: self.phi.mul_ref(g) }
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    lifts: Vec<Vec<String>>,
    weights: Vec<i64>,
    phi: PolyMatrix,
}

impl Serialize for SplittingCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let lifts = (0..self.lifts.rows()).map(|i| self.lifts.row(i).iter().map(q_to_string).collect()).collect();
        CertificateRepr { lifts, weights: self.weights.clone(), phi: self.phi.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SplittingCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CertificateRepr::deserialize(d)?;
        let n = r.weights.len();
        let mut rows = Vec::new();
        for row in &r.lifts {
            let parsed: std::result::Result<Vec<Q>, _> = row.iter().map(|s| q_parse(s)).collect();
            let parsed = parsed.map_err(serde::de::Error::custom)?;
            if parsed.len() != n {
                return Err(serde::de::Error::custom("lift matrix shape mismatch"));
            }
            rows.push(parsed);
        }
        Ok(SplittingCertificate { lifts: Matrix::from_rows(rows, n), weights: r.weights, phi: r.phi })
    }
}

/// `F` on `(gr^W V) ⊗ ℂ` in the graded coordinates of `lifts`.
fn graded_hodge(m: &MixedStructure, lifts: &Matrix<Q>, weights: &[i64]) -> Filtration {
    graded_pieces_for(m, lifts, weights)
        .into_iter()
        .map(|(_, f, _)| f)
        .reduce(|a, b| a.direct_sum(&b))
        .unwrap_or_else(|| Filtration::trivial(0, 0))
}

/// Membership of `v ∈ (V ⊗ ℂ)[x]` in `Σ_{a+b ≥ p} F^a ⊗ (x − i)^b`: the `k`-th
/// Taylor coefficient at `i` must lie in `F^{p−k}`.
fn in_tensor_filtration(f: &Filtration, v: &[Poly<Gauss>], p: i64) -> bool {
    let i = Gauss::i();
    let taylor: Vec<Vec<Gauss>> = v.iter().map(|c| c.taylor_at(&i)).collect();
    let len = taylor.iter().map(Vec::len).max().unwrap_or(0);
    for k in 0..len {
        let level = p - k as i64;
        if level <= f.p_min() {
            break;
        }
        let coeff: Vec<Gauss> = taylor.iter().map(|t| t.get(k).cloned().unwrap_or_else(Gauss::zero)).collect();
        if !f.at(level).contains(&coeff) {
            return false;
        }
    }
    true
}

/// Whether `g` maps `F^p` of the source filtration into `F^p` of the target
/// filtration for every `p`.
fn respects(g: &PolyMatrix, source: &Filtration, target: &Filtration) -> bool {
    let lo = source.p_min().min(target.p_min());
    let hi = source.p_max().max(target.p_max());
    (lo..=hi).all(|p| {
        let fresh = source.at(p).complement_in(&source.at(p + 1));
        fresh.iter().all(|w| in_tensor_filtration(target, &g.apply_complex(w), p))
    })
}

fn binom(n: usize, k: usize) -> Q {
    (0..k).fold(q_int(1), |acc, j| acc * q_int((n - j) as i64) / q_int((j + 1) as i64))
}

fn i_pow(e: usize) -> Gauss {
    match e % 4 {
        0 => Gauss::one(),
        1 => Gauss::i(),
        2 => -Gauss::one(),
        _ => -Gauss::i(),
    }
}

/// Annihilator rows `ℓ` of each `F^level V_ℂ` together with `ℓ L`.
type Annihilators = BTreeMap<i64, Vec<(Vec<Gauss>, Vec<Gauss>)>>;

/// Solves for the corrections `A_k` (`k ≤ deg`) in the columns of one weight
/// block. Unknowns are the entries listed in `lower`, degree-major; returns
/// the basic solution of the reduced system, or `None` if it is inconsistent.
fn solve_block(
    fv: &Filtration,
    ann: &Annihilators,
    lc: &Matrix<Gauss>,
    gens: &[(i64, Vec<Gauss>)],
    lower: &[(usize, usize)],
    deg: usize,
) -> Option<Vec<Q>> {
    let nl = lower.len();
    let nv = (deg + 1) * nl;
    let mut echelon = SparseEchelon::<Q>::new(false);
    for (a, w) in gens {
        let lw = lc.mul_vec(w);
        for t in 0..=deg {
            let level = a - t as i64;
            if level <= fv.p_min() {
                break;
            }
            for (ell, ell_l) in &ann[&level] {
                let mut re = SparseVec::new();
                let mut im = SparseVec::new();
                for k in t..=deg {
                    let scale = i_pow(k - t) * Gauss::real(binom(k, t));
                    for (idx, &(r, c)) in lower.iter().enumerate() {
                        let z = scale.mul_ref(&ell_l[r]).mul_ref(&w[c]);
                        if !z.re.is_zero() {
                            re.insert(k * nl + idx, z.re.clone());
                        }
                        if !z.im.is_zero() {
                            im.insert(k * nl + idx, z.im.clone());
                        }
                    }
                }
                if t == 0 {
                    let rhs = ell.iter().zip(&lw).fold(Gauss::zero(), |s, (x, y)| s + x.mul_ref(y));
                    if !rhs.re.is_zero() {
                        re.insert(nv, -rhs.re.clone());
                    }
                    if !rhs.im.is_zero() {
                        im.insert(nv, -rhs.im.clone());
                    }
                }
                for row in [re, im] {
                    if !row.is_empty() {
                        echelon.insert(&row);
                    }
                }
            }
        }
    }
    echelon.basic_solution(nv)
}

/// Computes an 𝒮-splitting `φ = L (I + Σ_k A_k x^k)` of a mixed Hodge
/// structure, with `L` an adapted basis and `A_k` rational and strictly
/// lowering the weight.
///
/// The columns of each weight block are solved separately. Within a block the
/// correction is searched degree by degree; at the first degree admitting
/// solutions the basic solution of the reduced linear system (free unknowns
/// set to zero) is used.
pub fn s_split(m: &MixedStructure) -> Result<SplittingCertificate> {
    if m.kind() != StructureKind::Mhs {
        return Err(Error::Invalid("s_split expects an MHS".into()));
    }
    let report = check_opposedness(m);
    if !report.opposed {
        return Err(Error::NotOpposed(format!("{} forbidden graded pieces", report.violations.len())));
    }
    let (lifts, weights) = m.weight().adapted_basis();
    let d = m.dim();
    let fv = m.hodge();
    let fgr = graded_hodge(m, &lifts, &weights);
    let lc = lifts.complexify();
    let ann: Annihilators = (fv.p_min() + 1..=fgr.p_max())
        .map(|level| {
            let rows = fv
                .at(level)
                .annihilator()
                .basis()
                .iter()
                .map(|ell| {
                    let ell_l = (0..d)
                        .map(|r| (0..d).fold(Gauss::zero(), |s, c| s + ell[c].mul_ref(&lc[(c, r)])))
                        .collect();
                    (ell.clone(), ell_l)
                })
                .collect();
            (level, rows)
        })
        .collect();
    // Vectors of F^{a+1} are constrained at level a + 1 already.
    let mut gens: Vec<(i64, Vec<Gauss>)> = Vec::new();
    for a in fgr.p_min().min(fv.p_min())..=fgr.p_max() {
        for w in fgr.at(a).complement_in(&fgr.at(a + 1)) {
            gens.push((a, w));
        }
    }
    let spread = match (weights.first(), weights.last()) {
        (Some(a), Some(b)) => (b - a) as usize,
        _ => 0,
    };
    let mut corrections: Vec<Matrix<Q>> = vec![Matrix::identity(d)];
    let mut blocks: Vec<i64> = weights.clone();
    blocks.dedup();
    for n in blocks {
        let cols: Vec<usize> = (0..d).filter(|&c| weights[c] == n).collect();
        let lower: Vec<(usize, usize)> =
            (0..d).filter(|&r| weights[r] < n).flat_map(|r| cols.iter().map(move |&c| (r, c))).collect();
        let block_gens: Vec<(i64, Vec<Gauss>)> =
            gens.iter().filter(|(_, w)| cols.iter().any(|&c| !w[c].is_zero())).cloned().collect();
        let mut found = None;
        for deg in 0..=spread + d {
            if let Some(sol) = solve_block(fv, &ann, &lc, &block_gens, &lower, deg) {
                found = Some((deg, sol));
                break;
            }
            if lower.is_empty() {
                break;
            }
        }
        let Some((deg, sol)) = found else {
            return Err(Error::IdentityFailed(format!("no 𝒮-splitting found for weight {n}")));
        };
        while corrections.len() <= deg {
            corrections.push(Matrix::zeros(d, d));
        }
        for k in 0..=deg {
            for (idx, &(r, c)) in lower.iter().enumerate() {
                corrections[k][(r, c)] = sol[k * lower.len() + idx].clone();
            }
        }
    }
    let phi = PolyMatrix::new(d, d, corrections.iter().map(|a| lifts.mul_ref(a)).collect());
    Ok(SplittingCertificate { lifts, weights, phi })
}

/// Re-checks a certificate from scratch: the lifts are adapted to `W`, `φ`
/// preserves `W ⊗ 𝒮` and induces the identity on `gr^W`, `φ` is invertible
/// over 𝒮, and `φ` and `φ⁻¹` both respect the Hodge filtrations on the
/// tensor products with 𝒮.
pub fn check_splitting(m: &MixedStructure, cert: &SplittingCertificate) -> Result<()> {
    let fail = |s: &str| Err(Error::IdentityFailed(s.into()));
    let d = m.dim();
    let (l, ws, phi) = (&cert.lifts, &cert.weights, &cert.phi);
    if l.rows() != d || l.cols() != d || ws.len() != d || phi.rows() != d || phi.cols() != d {
        return Err(Error::DimensionMismatch("certificate shape".into()));
    }
    if ws.windows(2).any(|p| p[0] > p[1]) {
        return fail("lift weights must be ascending");
    }
    let w = m.weight();
    let mut levels: Vec<i64> = ws.clone();
    levels.extend(w.weights());
    levels.sort();
    levels.dedup();
    for &n in &levels {
        let cols: Vec<Vec<Q>> = (0..d).filter(|&j| ws[j] <= n).map(|j| l.col(j)).collect();
        if cols.len() != w.at(n).dim() || Subspace::span(d, &cols) != w.at(n) {
            return fail("lifts are not adapted to the weight filtration");
        }
    }
    for j in 0..d {
        let below = w.at(ws[j] - 1);
        for (k, c) in phi.coeffs().iter().enumerate() {
            let mut col = c.col(j);
            if k == 0 {
                for (x, y) in col.iter_mut().zip(l.col(j)) {
                    *x = x.sub_ref(&y);
                }
            }
            if !below.contains(&col) {
                return fail("phi does not induce the identity on gr^W");
            }
        }
    }
    let inv = match phi.inverse() {
        Some(inv) if phi.is_inverse_of(&inv) => inv,
        _ => return fail("phi is not invertible over 𝒮"),
    };
    let fgr = graded_hodge(m, l, ws);
    if !respects(phi, &fgr, m.hodge()) {
        return fail("phi does not map F into F");
    }
    if !respects(&inv, m.hodge(), &fgr) {
        return fail("phi^-1 does not map F into F");
    }
    Ok(())
}

pub fn verify_splitting(m: &MixedStructure, cert: &SplittingCertificate) -> bool {
    check_splitting(m, cert).is_ok()
}

/// Whether `g ∈ id + W_{−1}γ⁰ End((gr^W V) ⊗ 𝒮)` for the graded coordinates
/// of `lifts`.
pub fn is_torsor_element(m: &MixedStructure, lifts: &Matrix<Q>, weights: &[i64], g: &PolyMatrix) -> bool {
    let d = weights.len();
    if g.rows() != d || g.cols() != d {
        return false;
    }
    let delta = g.sub_ref(&PolyMatrix::identity(d));
    let lowering = delta.coeffs().iter().all(|c| {
        (0..d).all(|r| (0..d).all(|col| c[(r, col)].is_zero() || weights[r] < weights[col]))
    });
    if !lowering {
        return false;
    }
    let fgr = graded_hodge(m, lifts, weights);
    respects(g, &fgr, &fgr)
}

/// `φ₂⁻¹ ∘ φ₁`, after identifying the graded coordinates of the two
/// certificates. Fails unless it lies in `id + W_{−1}γ⁰`.
pub fn splitting_difference(
    m: &MixedStructure,
    c1: &SplittingCertificate,
    c2: &SplittingCertificate,
) -> Result<PolyMatrix> {
    check_splitting(m, c1).map_err(|e| Error::Invalid(format!("first certificate: {e}")))?;
    check_splitting(m, c2).map_err(|e| Error::Invalid(format!("second certificate: {e}")))?;
    if c1.weights != c2.weights {
        return Err(Error::Invalid("certificates have different weight data".into()));
    }
    let d = m.dim();
    let l2inv = c2.lifts.inverse().ok_or(Error::Singular)?;
    let coords = l2inv.mul_ref(&c1.lifts);
    let t = Matrix::from_fn(d, d, |r, c| if c1.weights[r] == c1.weights[c] { coords[(r, c)].clone() } else { Q::zero() });
    let phi2 = c2.phi.mul_ref(&PolyMatrix::constant(t));
    let inv = phi2.inverse().ok_or(Error::Singular)?;
    let g = inv.mul_ref(&c1.phi);
    if !is_torsor_element(m, &c1.lifts, &c1.weights, &g) {
        return Err(Error::IdentityFailed("difference is not in id + W_{-1}γ⁰".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::WeightFiltration;

    fn g(re: i64, im: i64) -> Gauss {
        Gauss::new(q_int(re), q_int(im))
    }

    /// Extension of `ℚ(0)` (e0, weight 0) by `ℚ(1)` (e1, weight −2) with `F⁰`
    /// spanned by `e0 + (a + b i) e1`.
    fn extension(a: i64, b: i64) -> MixedStructure {
        let w = WeightFiltration::from_weights(&[0, -2]);
        let f0 = Subspace::span(2, &[vec![g(1, 0), g(a, b)]]);
        let f = Filtration::from_steps(2, vec![(-1, Subspace::full(2)), (0, f0)]).unwrap();
        MixedStructure::mhs(w, f).unwrap()
    }

    #[test]
    fn split_structure_gets_identity() {
        let m = extension(0, 0);
        let c = s_split(&m).unwrap();
        assert_eq!(c.phi, PolyMatrix::constant(c.lifts.clone()));
        assert!(verify_splitting(&m, &c));
    }

    #[test]
    fn rank_two_extension() {
        let m = extension(2, 3);
        let c = s_split(&m).unwrap();
        assert!(verify_splitting(&m, &c));
        // Lifts are (e1, e0); the e1-coordinate of φ(e0) is
        // affine in x: a + b x with φ(e0)(i) = e0 + (a + b i) e1.
        assert_eq!(c.weights, vec![-2, 0]);
        assert_eq!(c.phi.degree(), Some(1));
        let corr = c.phi.entry(1, 1);
        assert_eq!(corr.eval(&q_int(0)), q_int(2));
        assert_eq!(corr.coeff(1), q_int(3));
    }

    #[test]
    fn wrong_image_is_rejected() {
        let m = extension(2, 3);
        let c = s_split(&m).unwrap();
        let mut bad = c.clone();
        let mut e = Matrix::zeros(2, 2);
        e[(0, 1)] = q_int(1);
        bad.phi = bad.phi.add_ref(&PolyMatrix::constant(e));
        assert!(!verify_splitting(&m, &bad));
        assert!(!verify_splitting(&m, &SplittingCertificate { phi: PolyMatrix::identity(2), ..c }));
    }

    #[test]
    fn difference_is_torsor_element() {
        let m = extension(1, -1);
        let c = s_split(&m).unwrap();
        let d = splitting_difference(&m, &c, &c).unwrap();
        assert_eq!(d, PolyMatrix::identity(2));
        // (x² + 1) vanishes at i, so it is a legal lower-triangular correction.
        let mut a0 = Matrix::identity(2);
        a0[(0, 1)] = q_int(1);
        let mut a2 = Matrix::zeros(2, 2);
        a2[(0, 1)] = q_int(1);
        let t = PolyMatrix::new(2, 2, vec![a0, Matrix::zeros(2, 2), a2]);
        assert!(is_torsor_element(&m, &c.lifts, &c.weights, &t));
        let c2 = c.compose(&t);
        assert!(verify_splitting(&m, &c2));
        assert_eq!(splitting_difference(&m, &c2, &c).unwrap(), t);
    }

    #[test]
    fn permuted_basis_difference() {
        let m = extension(1, 2).direct_sum(&extension(-3, 1)).unwrap();
        let c1 = s_split(&m).unwrap();
        assert!(verify_splitting(&m, &c1));
        let p = Matrix::from_fn(4, 4, |r, c| if (r + 1) % 4 == c { q_int(1) } else { q_int(0) });
        let m2 = m.change_basis(&p).unwrap();
        let c2 = s_split(&m2).unwrap().pull_back(&p).unwrap();
        assert!(verify_splitting(&m, &c2));
        let diff = splitting_difference(&m, &c1, &c2).unwrap();
        assert!(is_torsor_element(&m, &c1.lifts, &c1.weights, &diff));
    }

    #[test]
    fn certificate_serde_round_trip() {
        let m = extension(2, 3);
        let c = s_split(&m).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: SplittingCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
