//! Named fixtures, resolved to the document kind a command expects.
//!
//! Names: `point`, `sphere2`, `proj-plane`, `proj-space(n)`, `k3`,
//! `elliptic`, `acyclic-square` or `acyclic-square(k)`, `twisted-extension`,
//! `formal(r0;r1;...)` with diamond rows separated by `;`, `tensor(f1,f2)`;
//! the structures `elliptic-h1`, `s-truncation`, `tate(n)`, `tate-stack`,
//! `mts(f)`; and the Lie algebra `nilpotent-interval`.

use crate::dcoh::HodgeDiamond;
use crate::error::{Error, Result};
use crate::filt::Filtration;
use crate::kahler::{fixtures as pk, KahlerPackage};
use crate::linalg::{SparseVec, Subspace};
use crate::mhs::{mts_underlying, MixedStructure, WeightFiltration};
use crate::rht::{fixtures as rings, free_nilpotent, gauge_act, NilpotentDGLA};
use crate::scalars::{q_int, Field, Gauss, Q};

use super::schema::{AlgebraDoc, DglaDoc, DiamondDoc, Document, MhsDoc, PackageDoc};

pub enum Fixture {
    Package(KahlerPackage),
    Mhs(MixedStructure),
    Dgla(NilpotentDGLA, SparseVec<Q>, SparseVec<Q>),
}

fn unknown(name: &str) -> Error {
    Error::Invalid(format!("unknown fixture `{name}`"))
}

/// Splits `head(args)` into the head and the argument string.
fn split_call(name: &str) -> Result<(&str, Option<&str>)> {
    let name = name.trim();
    match name.find('(') {
        None => Ok((name, None)),
        Some(i) if name.ends_with(')') => Ok((name[..i].trim(), Some(&name[i + 1..name.len() - 1]))),
        Some(_) => Err(Error::Invalid(format!("unbalanced parentheses in `{name}`"))),
    }
}

/// Splits at commas outside parentheses.
fn split_top_level(args: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in args.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(args[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(args[start..].trim());
    out
}

fn int_arg<T: std::str::FromStr>(name: &str, args: Option<&str>, default: Option<T>) -> Result<T> {
    match args {
        Some(a) => a.trim().parse().map_err(|_| Error::Invalid(format!("bad argument `{a}` for `{name}`"))),
        None => default.ok_or_else(|| Error::Invalid(format!("`{name}` needs an argument"))),
    }
}

fn diamond_rows(args: &str) -> Result<Vec<Vec<usize>>> {
    args.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Invalid(format!("bad Hodge number `{x}`"))))
                .collect()
        })
        .collect()
}

fn g(re: i64, im: i64) -> Gauss {
    Gauss::new(q_int(re), q_int(im))
}

fn two_step(weight: WeightFiltration, p0: i64, f1: Vec<Gauss>) -> Result<MixedStructure> {
    let dim = weight.dim();
    let hodge = Filtration::from_steps(dim, vec![(p0, Subspace::full(dim)), (p0 + 1, Subspace::span(dim, &[f1]))])?;
    MixedStructure::mhs(weight, hodge)
}

pub fn package(name: &str) -> Result<KahlerPackage> {
    let (head, args) = split_call(name)?;
    match head {
        "point" => Ok(pk::point()),
        "sphere2" => Ok(pk::sphere2()),
        "proj-plane" => Ok(pk::projective_plane()),
        "proj-space" => pk::formal(rings::projective_space(int_arg(head, args, None)?)),
        "k3" => Ok(pk::k3()),
        "elliptic" => Ok(pk::elliptic()),
        "acyclic-square" => Ok(pk::acyclic_square(int_arg(head, args, Some(0))?)),
        "twisted-extension" => Ok(pk::twisted_extension()),
        "formal" => pk::formal_diamond(&diamond_rows(args.ok_or_else(|| unknown(name))?)?),
        "tensor" => {
            let parts = split_top_level(args.ok_or_else(|| unknown(name))?);
            let [a, b] = parts.as_slice() else {
                return Err(Error::Invalid("`tensor` takes two fixtures".into()));
            };
            pk::tensor(&package(a)?, &package(b)?)
        }
        _ => Err(unknown(name)),
    }
}

pub fn mhs(name: &str) -> Result<MixedStructure> {
    let (head, args) = split_call(name)?;
    match head {
        "elliptic-h1" => two_step(WeightFiltration::pure(2, 1), 0, vec![g(1, 0), g(0, 1)]),
        "s-truncation" => two_step(WeightFiltration::pure(2, 0), 0, vec![g(0, -1), g(1, 0)]),
        "tate" => {
            let n: i64 = int_arg(head, args, None)?;
            MixedStructure::mhs(WeightFiltration::pure(1, -2 * n), Filtration::trivial(1, -n))
        }
        "tate-stack" => two_step(WeightFiltration::from_weights(&[0, -2]), -1, vec![g(1, 0), g(1, 0)]),
        "mts" => mts_underlying(&mhs(args.ok_or_else(|| unknown(name))?)?),
        _ => Err(unknown(name)),
    }
}

/// `F(3, 2) ⊗ Ω(Δ¹)` truncated at `s³`, with `ω` the gauge transform of zero
/// by the first four degree-zero generators and gauge element the next two.
pub fn dgla(name: &str) -> Result<(NilpotentDGLA, SparseVec<Q>, SparseVec<Q>)> {
    match name.trim() {
        "nilpotent-interval" => {
            let l = free_nilpotent(&[0, 0], 3)?.tensor(&rings::interval_forms(2))?;
            let deg0 = l.indices_of_degree(0);
            let a: SparseVec<Q> = deg0.iter().take(4).map(|&i| (i, Q::one())).collect();
            let b: SparseVec<Q> = deg0.iter().skip(4).take(2).map(|&i| (i, q_int(-1))).collect();
            let omega = gauge_act(&l, &a, &SparseVec::new())?;
            Ok((l, omega, b))
        }
        _ => Err(unknown(name)),
    }
}

pub fn fixture(name: &str) -> Result<Fixture> {
    if let Ok(p) = package(name) {
        return Ok(Fixture::Package(p));
    }
    if let Ok(m) = mhs(name) {
        return Ok(Fixture::Mhs(m));
    }
    let (l, o, g) = dgla(name)?;
    Ok(Fixture::Dgla(l, o, g))
}

/// Hodge diamond of a package whose harmonic classes all carry a type.
pub fn diamond_of(p: &KahlerPackage) -> Result<HodgeDiamond> {
    let n = p.algebra().max_degree() / 2;
    let mut entries = Vec::new();
    for ((a, b), h) in p.hodge_numbers() {
        if a < 0 || b < 0 {
            return Err(Error::Invalid(format!("Hodge number h^({a},{b}) has a negative index")));
        }
        entries.push(((a as u32, b as u32), h));
    }
    HodgeDiamond::new(n, entries)
}

impl Fixture {
    /// The natural document of the fixture.
    pub fn document(&self) -> Document {
        match self {
            Fixture::Package(p) => Document::Package(PackageDoc::from_package(p)),
            Fixture::Mhs(m) => Document::Mhs(MhsDoc::from_structure(m)),
            Fixture::Dgla(l, o, g) => Document::Dgla(DglaDoc::from_dgla(l, o, g)),
        }
    }

    /// The fixture as a document of kind `kind`: packages also yield their
    /// algebra and their Hodge diamond.
    pub fn document_of_kind(&self, kind: &str) -> Result<Document> {
        match (self, kind) {
            (Fixture::Package(p), "algebra") => Ok(Document::Algebra(AlgebraDoc::from_algebra(p.algebra()))),
            (Fixture::Package(p), "diamond") => Ok(Document::Diamond(DiamondDoc::from_diamond(&diamond_of(p)?))),
            _ => {
                let d = self.document();
                if d.kind() == kind {
                    Ok(d)
                } else {
                    Err(Error::Invalid(format!("fixture has kind {}, not {kind}", d.kind())))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::validate_package;
    use crate::mhs::{check_opposedness, hodge_numbers};

    #[test]
    fn nested_names() {
        assert_eq!(split_top_level("tensor(a,b),c"), vec!["tensor(a,b)", "c"]);
        let p = package("tensor(elliptic,tensor(sphere2,acyclic-square(1)))").unwrap();
        assert_eq!(p.dim(), 4 * 2 * 5);
        assert_eq!(package("formal(1;0,0;0,2,0)").unwrap().dim(), 3);
        assert!(package("tensor(elliptic)").is_err());
        assert!(package("mystery").is_err());
        assert!(fixture("proj-space(x)").is_err());
    }

    #[test]
    fn packages_validate() {
        for name in ["point", "sphere2", "proj-plane", "proj-space(3)", "k3", "elliptic", "acyclic-square", "acyclic-square(2)", "twisted-extension", "formal(1;0,0;0,2,0;0,0,0,0;0,0,1,0,0)", "tensor(elliptic,elliptic)"] {
            let p = package(name).unwrap();
            assert!(validate_package(&p).valid, "{name}");
        }
    }

    #[test]
    fn structures() {
        assert!(check_opposedness(&mhs("elliptic-h1").unwrap()).opposed);
        assert!(!check_opposedness(&mhs("s-truncation").unwrap()).opposed);
        let t = mhs("tate(2)").unwrap();
        assert_eq!(hodge_numbers(&t).unwrap().into_iter().collect::<Vec<_>>(), vec![((-2, -2), 1)]);
        assert!(check_opposedness(&mhs("tate-stack").unwrap()).opposed);
        assert!(check_opposedness(&mhs("mts(elliptic-h1)").unwrap()).opposed);
    }

    #[test]
    fn abelian_surface_diamond() {
        let d = diamond_of(&package("tensor(elliptic,elliptic)").unwrap()).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!((d.h(1, 0), d.h(1, 1), d.h(2, 0)), (2, 4, 1));
    }
}
