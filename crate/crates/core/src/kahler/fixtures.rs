//! Small Kähler packages: formal rings, the elliptic curve with its complex
//! structure, acyclic ddᶜ-squares, harmonic extensions, tensor products and
//! transports along isometries.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rht::{fixtures as rings, BasisElement, GCAlgebra};
use crate::scalars::{Field, Q};

use super::package::{to_dense, to_sparse, KahlerPackage};

fn derived_weil(a: &GCAlgebra) -> Option<Matrix<Q>> {
    let all_pp = (0..a.dim()).all(|i| matches!(a.bitype(i), Some((p, q)) if p == q));
    all_pp.then(|| Matrix::zeros(a.dim(), a.dim()))
}

/// A ring with zero differential, the standard inner product and `Λ = 0`.
/// When every class has type `(p, p)` the operator `C` is recorded as zero;
/// otherwise the bitypes of the basis stand in for it.
pub fn formal(ring: GCAlgebra) -> Result<KahlerPackage> {
    if !ring.has_zero_differential() {
        return Err(Error::Invalid("a formal package needs zero differential".into()));
    }
    let n = ring.dim();
    let weil = derived_weil(&ring);
    KahlerPackage::new(ring, Matrix::identity(n), Matrix::zeros(n, n), Matrix::zeros(n, n), weil)
}

pub fn point() -> KahlerPackage {
    let ring = GCAlgebra::new(vec![BasisElement::typed("1", 0, 0)], 0, &[], &[], true).expect("valid");
    formal(ring).expect("valid")
}

pub fn sphere2() -> KahlerPackage {
    formal(rings::sphere(2)).expect("valid")
}

pub fn projective_plane() -> KahlerPackage {
    formal(rings::projective_space(2)).expect("valid")
}

pub fn k3() -> KahlerPackage {
    formal(rings::k3()).expect("valid")
}

/// Formal package on a ring with prescribed Hodge numbers `h^{p,q}`, given
/// as rows of the Hodge diamond indexed by `p + q`. The classes of type
/// `(p, q)` multiply to zero in positive degree.
pub fn formal_diamond(diamond: &[Vec<usize>]) -> Result<KahlerPackage> {
    let mut basis = vec![BasisElement::typed("1", 0, 0)];
    for (k, row) in diamond.iter().enumerate() {
        if row.len() != k + 1 {
            return Err(Error::Invalid(format!("row {k} of the Hodge diamond must have {} entries", k + 1)));
        }
        for (p, &h) in row.iter().enumerate() {
            let q = k - p;
            let h = if k == 0 && p == 0 {
                if h != 1 {
                    return Err(Error::Invalid("h^{0,0} must be 1".into()));
                }
                0
            } else {
                h
            };
            for j in 0..h {
                basis.push(BasisElement::typed(&format!("h{p}{q}_{j}"), p as i64, q as i64));
            }
        }
    }
    formal(GCAlgebra::new(basis, 0, &[], &[], true)?)
}

/// The elliptic curve `ℂ/ℤ²` in the real basis `1, dx, dy, dx∧dy`, with
/// `C dx = −dy`, `C dy = dx` and `Λ(dx∧dy) = 1`.
pub fn elliptic() -> KahlerPackage {
    let basis = vec![
        BasisElement::new("1", 0),
        BasisElement::new("dx", 1),
        BasisElement::new("dy", 1),
        BasisElement::new("dxdy", 2),
    ];
    let ring = GCAlgebra::new(basis, 0, &[(1, 2, 3, Q::one())], &[], true).expect("valid");
    let mut c = Matrix::zeros(4, 4);
    c[(2, 1)] = -Q::one();
    c[(1, 2)] = Q::one();
    let mut lambda = Matrix::zeros(4, 4);
    lambda[(0, 3)] = Q::one();
    KahlerPackage::new(ring, Matrix::identity(4), Matrix::zeros(4, 4), lambda, Some(c)).expect("valid")
}

/// Extends a package with zero differential by an acyclic square
/// `e, de, dᶜe, ddᶜe` with `e` of type `(k, k)`.
///
/// Products of the base classes acquire a correction `φ(a, b)·ddᶜe` and `e`
/// acts on the base through `ρ`: `e·h = ρ(h)`. All other products with the
/// square vanish. `phi` lists `(i, j, c)` meaning `φ(hᵢ, hⱼ) = c` (entered
/// symmetrically) and `rho` lists `(i, j, c)` meaning `ρ(hᵢ) ∋ c·hⱼ`.
pub fn harmonic_extension(
    base: &KahlerPackage,
    k: u32,
    phi: &[(usize, usize, Q)],
    rho: &[(usize, usize, Q)],
) -> Result<KahlerPackage> {
    if !base.d().is_zero() || !base.dc().is_zero() {
        return Err(Error::Invalid("the base of a harmonic extension must have zero differential".into()));
    }
    let ha = base.algebra();
    let m = ha.dim();
    let (e, de, dce, ddce) = (m, m + 1, m + 2, m + 3);
    let mut basis: Vec<BasisElement> =
        ha.basis().iter().map(|b| BasisElement::new(&b.label, b.degree)).collect();
    basis.push(BasisElement::new("e", 2 * k));
    basis.push(BasisElement::new("de", 2 * k + 1));
    basis.push(BasisElement::new("dᶜe", 2 * k + 1));
    basis.push(BasisElement::new("ddᶜe", 2 * k + 2));
    let mut products = Vec::new();
    for ((i, j), v) in ha.products() {
        for (l, c) in v {
            products.push((*i, *j, *l, c.clone()));
        }
    }
    for (i, j, c) in phi {
        if ha.degree(*i) + ha.degree(*j) != 2 * k + 2 {
            return Err(Error::Invalid(format!("φ({i}, {j}) does not land in degree {}", 2 * k + 2)));
        }
        products.push((*i, *j, ddce, c.clone()));
        if i != j {
            products.push((*j, *i, ddce, c.clone()));
        }
    }
    for (i, j, c) in rho {
        if ha.degree(*j) != ha.degree(*i) + 2 * k {
            return Err(Error::Invalid(format!("ρ({i}) ∋ h{j} has the wrong degree")));
        }
        products.push((e, *i, *j, c.clone()));
        products.push((*i, e, *j, c.clone()));
    }
    let unit = ha.unit();
    for x in [e, de, dce, ddce] {
        products.push((unit, x, x, Q::one()));
        products.push((x, unit, x, Q::one()));
    }
    let differential = [(e, de, Q::one()), (dce, ddce, Q::one())];
    let algebra = GCAlgebra::new(basis, unit, &products, &differential, false)?;
    let n = m + 4;
    let embed = |src: &Matrix<Q>| {
        let mut out = Matrix::zeros(n, n);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = src[(i, j)].clone();
            }
        }
        out
    };
    let mut gram = embed(base.gram());
    for x in [e, de, dce, ddce] {
        gram[(x, x)] = Q::one();
    }
    let mut dc = Matrix::zeros(n, n);
    dc[(dce, e)] = Q::one();
    dc[(ddce, de)] = -Q::one();
    let mut lambda = embed(base.lambda());
    lambda[(e, ddce)] = Q::one();
    let base_weil = match base.weil() {
        Some(c) => c.clone(),
        None => derived_weil(ha).ok_or_else(|| {
            Error::Invalid("the base needs an operator C or classes of type (p, p) only".into())
        })?,
    };
    let mut weil = embed(&base_weil);
    weil[(dce, de)] = Q::one();
    weil[(de, dce)] = -Q::one();
    KahlerPackage::new(algebra, gram, dc, lambda, Some(weil))
}

/// The acyclic square on its own: `ℚ ⊕ ⟨e, de, dᶜe, ddᶜe⟩` with square-zero
/// augmentation ideal.
pub fn acyclic_square(k: u32) -> KahlerPackage {
    harmonic_extension(&point(), k, &[], &[]).expect("valid")
}

/// Smallest extension with a nonzero obstruction to splitting: base classes
/// `a, b` in degree 2 and `t` in degree 4 with all products of `a, b` zero,
/// corrected by `a·b = ddᶜe`, and `e·a = t`.
pub fn twisted_extension() -> KahlerPackage {
    let basis = vec![
        BasisElement::typed("1", 0, 0),
        BasisElement::typed("a", 1, 1),
        BasisElement::typed("b", 1, 1),
        BasisElement::typed("t", 2, 2),
    ];
    let ring = GCAlgebra::new(basis, 0, &[], &[], true).expect("valid");
    let base = formal(ring).expect("valid");
    harmonic_extension(&base, 1, &[(1, 2, Q::one())], &[(1, 3, Q::one())]).expect("valid")
}

fn parity(a: &GCAlgebra) -> Matrix<Q> {
    let n = a.dim();
    Matrix::from_fn(n, n, |i, j| {
        if i != j {
            Q::zero()
        } else if a.degree(i) % 2 == 1 {
            -Q::one()
        } else {
            Q::one()
        }
    })
}

/// Tensor product of packages, with the Koszul sign on `dᶜ`.
pub fn tensor(p1: &KahlerPackage, p2: &KahlerPackage) -> Result<KahlerPackage> {
    let algebra = p1.algebra().tensor(p2.algebra());
    let (n1, n2) = (p1.dim(), p2.dim());
    let (i1, i2) = (Matrix::<Q>::identity(n1), Matrix::<Q>::identity(n2));
    let gram = p1.gram().kron(p2.gram());
    let dc = p1.dc().kron(&i2) + parity(p1.algebra()).kron(p2.dc());
    let lambda = p1.lambda().kron(&i2) + i1.kron(p2.lambda());
    let weil = match (p1.weil(), p2.weil()) {
        (None, None) => None,
        (c1, c2) => {
            let get = |c: Option<&Matrix<Q>>, a: &GCAlgebra| c.cloned().or_else(|| derived_weil(a));
            let c1 = get(c1, p1.algebra()).ok_or_else(|| Error::Invalid("first factor lacks an operator C".into()))?;
            let c2 = get(c2, p2.algebra()).ok_or_else(|| Error::Invalid("second factor lacks an operator C".into()))?;
            Some(c1.kron(&i2) + i1.kron(&c2))
        }
    };
    KahlerPackage::new(algebra, gram, dc, lambda, weil)
}

/// Transport of a package along a degree-preserving automorphism `φ` of
/// the underlying space fixing the unit and the augmentation: every
/// operator is conjugated and `φ` becomes an isometry.
pub fn transport(p: &KahlerPackage, phi: &Matrix<Q>) -> Result<KahlerPackage> {
    let n = p.dim();
    let inv = phi.inverse().ok_or(Error::Singular)?;
    let a = p.algebra();
    let u = a.unit();
    for i in 0..n {
        for j in 0..n {
            if !phi[(i, j)].is_zero() && a.degree(i) != a.degree(j) {
                return Err(Error::Invalid("transport must preserve degrees".into()));
            }
        }
        let unit_entry = if i == u { Q::one() } else { Q::zero() };
        if phi[(i, u)] != unit_entry || phi[(u, i)] != unit_entry {
            return Err(Error::Invalid("transport must fix the unit and the augmentation".into()));
        }
    }
    let conj = |m: &Matrix<Q>| phi.mul_ref(m).mul_ref(&inv);
    let mut products = Vec::new();
    let mut differential = Vec::new();
    let d = conj(p.d());
    for i in 0..n {
        let xi = to_sparse(&inv.col(i));
        for j in 0..n {
            let xj = to_sparse(&inv.col(j));
            let prod = phi.mul_vec(&to_dense(&a.mul(&xi, &xj), n));
            for (k, c) in prod.into_iter().enumerate() {
                if !c.is_zero() {
                    products.push((i, j, k, c));
                }
            }
        }
        for k in 0..n {
            if !d[(k, i)].is_zero() {
                differential.push((i, k, d[(k, i)].clone()));
            }
        }
    }
    let algebra = GCAlgebra::new(a.basis().to_vec(), u, &products, &differential, false)?;
    let gram = inv.transpose().mul_ref(p.gram()).mul_ref(&inv);
    KahlerPackage::new(algebra, gram, conj(p.dc()), conj(p.lambda()), p.weil().map(conj))
}
