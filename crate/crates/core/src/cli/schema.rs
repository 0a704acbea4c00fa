//! JSON documents accepted by the command line, tagged by `kind`, and their
//! conversions to library types. Rationals are strings `"p/q"`; Gaussian
//! rationals are `["re", "im"]` pairs or plain rational strings.

use serde::{Deserialize, Serialize};

use crate::dcoh::HodgeDiamond;
use crate::error::{Error, Result};
use crate::filt::{Filtration, RationalSpace, RealStructure};
use crate::kahler::KahlerPackage;
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::mhs::{MixedStructure, StructureKind, WeightFiltration};
use crate::rht::{BasisElement, GCAlgebra, NilpotentDGLA};
use crate::scalars::{serde_q, Field, Gauss, Q};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rat(#[serde(with = "serde_q")] pub Q);

impl From<Q> for Rat {
    fn from(q: Q) -> Self {
        Rat(q)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Filtration(FiltrationDoc),
    Mhs(MhsDoc),
    Algebra(AlgebraDoc),
    Package(PackageDoc),
    Diamond(DiamondDoc),
    Dgla(DglaDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Filtration(_) => "filtration",
            Document::Mhs(_) => "mhs",
            Document::Algebra(_) => "algebra",
            Document::Package(_) => "package",
            Document::Diamond(_) => "diamond",
            Document::Dgla(_) => "dgla",
        }
    }
}

/// One step `F^p`, spanned by the listed vectors of `ℂ^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeStep {
    pub p: i64,
    pub span: Vec<Vec<Gauss>>,
}

/// One step `W_n`, spanned by the listed vectors of `ℚ^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightStep {
    pub n: i64,
    pub span: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub steps: Vec<HodgeStep>,
    /// Matrix `C` of the real structure `v ↦ C·v̄`, by rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<Vec<Vec<Gauss>>>,
    /// Weight for the purity test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MhsDoc {
    pub structure: StructureKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub weight: Vec<WeightStep>,
    pub hodge: Vec<HodgeStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge_minus: Option<Vec<HodgeStep>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub unit: usize,
    /// `(i, j, k, c)`: `e_i·e_j ∋ c·e_k`.
    #[serde(default)]
    pub products: Vec<(usize, usize, usize, Rat)>,
    /// `(i, k, c)`: `d e_i ∋ c·e_k`.
    #[serde(default)]
    pub differential: Vec<(usize, usize, Rat)>,
    /// Fill in unit products and mirror products with the Koszul sign.
    #[serde(default)]
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackageDoc {
    pub algebra: AlgebraDoc,
    pub gram: Vec<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dc: Option<Vec<Vec<Rat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<Rat>>>,
    /// The Weil operator `C`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weil: Option<Vec<Vec<Rat>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiamondDoc {
    pub n: u32,
    /// `(p, q, h^{p,q})`; unlisted entries are zero.
    pub entries: Vec<(u32, u32, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DglaDoc {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    /// `(i, j, k, c)`: `[x_i, x_j] ∋ c·x_k`, all ordered pairs listed.
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, Rat)>,
    #[serde(default)]
    pub differential: Vec<(usize, usize, Rat)>,
    /// Candidate Maurer–Cartan element, sparse.
    pub omega: Vec<(usize, Rat)>,
    /// Gauge element of degree 0, sparse.
    #[serde(default)]
    pub gauge: Vec<(usize, Rat)>,
}

fn space(dim: usize, labels: &Option<Vec<String>>) -> Result<RationalSpace> {
    match labels {
        Some(l) if l.len() != dim => Err(Error::BadLabels),
        Some(l) => RationalSpace::new(l.clone()),
        None => Ok(RationalSpace::standard(dim)),
    }
}

fn check_len<T>(v: &[T], dim: usize, what: &str) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch(format!("{what} has length {} instead of {dim}", v.len())));
    }
    Ok(())
}

fn hodge_filtration(dim: usize, steps: &[HodgeStep]) -> Result<Filtration> {
    let mut out = Vec::new();
    for s in steps {
        for v in &s.span {
            check_len(v, dim, &format!("a vector of F^{}", s.p))?;
        }
        out.push((s.p, Subspace::span(dim, &s.span)));
    }
    Filtration::from_steps(dim, out)
}

pub fn rat_matrix(rows: &[Vec<Rat>], n_rows: usize, n_cols: usize, what: &str) -> Result<Matrix<Q>> {
    check_len(rows, n_rows, what)?;
    for r in rows {
        check_len(r, n_cols, &format!("a row of {what}"))?;
    }
    Ok(Matrix::from_fn(n_rows, n_cols, |i, j| rows[i][j].0.clone()))
}

pub fn matrix_rows(m: &Matrix<Q>) -> Vec<Vec<Rat>> {
    (0..m.rows()).map(|i| m.row(i).iter().cloned().map(Rat).collect()).collect()
}

fn sparse(v: &[(usize, Rat)], dim: usize, what: &str) -> Result<SparseVec<Q>> {
    let mut out = SparseVec::new();
    for (i, c) in v {
        if *i >= dim {
            return Err(Error::Invalid(format!("{what} index {i} out of range")));
        }
        let e = out.entry(*i).or_insert_with(Q::zero);
        *e = e.add_ref(&c.0);
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

impl FiltrationDoc {
    pub fn build(&self) -> Result<(RationalSpace, Filtration, RealStructure)> {
        let v = space(self.dim, &self.labels)?;
        let f = hodge_filtration(self.dim, &self.steps)?;
        let sigma = match &self.conjugation {
            None => RealStructure::standard(self.dim),
            Some(rows) => {
                check_len(rows, self.dim, "conjugation")?;
                for r in rows {
                    check_len(r, self.dim, "a row of conjugation")?;
                }
                RealStructure::new(Matrix::from_fn(self.dim, self.dim, |i, j| rows[i][j].clone()))?
            }
        };
        Ok((v, f, sigma))
    }
}

impl MhsDoc {
    pub fn build(&self) -> Result<MixedStructure> {
        let v = space(self.dim, &self.labels)?;
        let mut w = Vec::new();
        for s in &self.weight {
            let vecs: Vec<Vec<Q>> = s.span.iter().map(|v| v.iter().map(|c| c.0.clone()).collect()).collect();
            for x in &vecs {
                check_len(x, self.dim, &format!("a vector of W_{}", s.n))?;
            }
            w.push((s.n, Subspace::span(self.dim, &vecs)));
        }
        let weight = WeightFiltration::from_steps(self.dim, w)?;
        let hodge = hodge_filtration(self.dim, &self.hodge)?;
        let minus = self.hodge_minus.as_ref().map(|s| hodge_filtration(self.dim, s)).transpose()?;
        MixedStructure::new(v, weight, hodge, minus, self.structure)
    }

    pub fn from_structure(m: &MixedStructure) -> Self {
        let hodge_steps = |f: &Filtration| -> Vec<HodgeStep> {
            f.steps().into_iter().map(|(p, s)| HodgeStep { p, span: s.basis().to_vec() }).collect()
        };
        MhsDoc {
            structure: m.kind(),
            dim: m.dim(),
            labels: Some(m.space().labels().to_vec()),
            weight: m
                .weight()
                .steps()
                .into_iter()
                .map(|(n, s)| WeightStep { n, span: s.basis().iter().map(|v| v.iter().cloned().map(Rat).collect()).collect() })
                .collect(),
            hodge: hodge_steps(m.hodge()),
            hodge_minus: (m.kind() == StructureKind::Mts).then(|| hodge_steps(&m.hodge_minus())),
        }
    }
}

impl AlgebraDoc {
    pub fn build(&self) -> Result<GCAlgebra> {
        let products: Vec<(usize, usize, usize, Q)> =
            self.products.iter().map(|(i, j, k, c)| (*i, *j, *k, c.0.clone())).collect();
        let differential: Vec<(usize, usize, Q)> =
            self.differential.iter().map(|(i, k, c)| (*i, *k, c.0.clone())).collect();
        GCAlgebra::new(self.basis.clone(), self.unit, &products, &differential, self.complete)
    }

    pub fn from_algebra(a: &GCAlgebra) -> Self {
        let mut products = Vec::new();
        for ((i, j), v) in a.products() {
            for (k, c) in v {
                products.push((*i, *j, *k, Rat(c.clone())));
            }
        }
        let mut differential = Vec::new();
        for i in 0..a.dim() {
            for (k, c) in a.d_basis(i) {
                differential.push((i, *k, Rat(c.clone())));
            }
        }
        AlgebraDoc { basis: a.basis().to_vec(), unit: a.unit(), products, differential, complete: false }
    }
}

impl PackageDoc {
    pub fn build(&self) -> Result<KahlerPackage> {
        let a = self.algebra.build()?;
        let n = a.dim();
        let opt = |m: &Option<Vec<Vec<Rat>>>, what: &str| -> Result<Matrix<Q>> {
            match m {
                Some(rows) => rat_matrix(rows, n, n, what),
                None => Ok(Matrix::zeros(n, n)),
            }
        };
        let gram = rat_matrix(&self.gram, n, n, "gram")?;
        let dc = opt(&self.dc, "dc")?;
        let lambda = opt(&self.lambda, "lambda")?;
        let weil = self.weil.as_ref().map(|rows| rat_matrix(rows, n, n, "weil")).transpose()?;
        KahlerPackage::new(a, gram, dc, lambda, weil)
    }

    pub fn from_package(p: &KahlerPackage) -> Self {
        let nz = |m: &Matrix<Q>| (!m.is_zero()).then(|| matrix_rows(m));
        PackageDoc {
            algebra: AlgebraDoc::from_algebra(p.algebra()),
            gram: matrix_rows(p.gram()),
            dc: nz(p.dc()),
            lambda: nz(p.lambda()),
            weil: p.weil().map(matrix_rows),
        }
    }
}

impl DiamondDoc {
    pub fn build(&self) -> Result<HodgeDiamond> {
        HodgeDiamond::new(self.n, self.entries.iter().map(|&(p, q, h)| ((p, q), h)))
    }

    pub fn from_diamond(h: &HodgeDiamond) -> Self {
        DiamondDoc { n: h.dim(), entries: h.entries().iter().filter(|(_, &v)| v > 0).map(|(&(p, q), &v)| (p, q, v)).collect() }
    }
}

impl DglaDoc {
    pub fn from_dgla(l: &NilpotentDGLA, omega: &SparseVec<Q>, gauge: &SparseVec<Q>) -> Self {
        let n = l.dim();
        let mut brackets = Vec::new();
        let mut differential = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in l.bracket_basis(i, j) {
                    brackets.push((i, j, k, Rat(c)));
                }
            }
            for (k, c) in l.d_basis(i) {
                differential.push((i, *k, Rat(c.clone())));
            }
        }
        let sp = |v: &SparseVec<Q>| v.iter().map(|(i, c)| (*i, Rat(c.clone()))).collect();
        DglaDoc {
            labels: l.labels().to_vec(),
            degrees: l.degrees().to_vec(),
            brackets,
            differential,
            omega: sp(omega),
            gauge: sp(gauge),
        }
    }

    pub fn build(&self) -> Result<(NilpotentDGLA, SparseVec<Q>, SparseVec<Q>)> {
        let brackets: Vec<(usize, usize, usize, Q)> =
            self.brackets.iter().map(|(i, j, k, c)| (*i, *j, *k, c.0.clone())).collect();
        let differential: Vec<(usize, usize, Q)> =
            self.differential.iter().map(|(i, k, c)| (*i, *k, c.0.clone())).collect();
        let l = NilpotentDGLA::new(self.labels.clone(), self.degrees.clone(), &brackets, &differential)?;
        let n = self.degrees.len();
        Ok((l, sparse(&self.omega, n, "omega")?, sparse(&self.gauge, n, "gauge")?))
    }
}
