//! Command dispatch and report generation for the `hodge-homotopy` binary.
//!
//! A job names a command, an input document (a file or a named fixture) and
//! options. Its report carries a pass/fail status, a command-specific
//! payload and the provenance of the run; identical jobs give byte-identical
//! reports.

pub mod fixtures;
pub mod schema;

use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dcoh::{archimedean_hilbert, deligne_table, normal_monomials, rjc_cone_check, HodgeDiamond, WeightWindow};
use crate::error::{Error, Result};
use crate::filt::{is_pure_hodge, rees_jumps};
use crate::kahler::{
    formality_zigzag_at, monodromy, pi4_structure, restrict_to_s, validate_package, KahlerPackage,
};
use crate::linalg::SparseVec;
use crate::mhs::{
    bundle_type, check_opposedness, hodge_numbers, is_valid_mts, mts_underlying, s_split, verify_splitting,
    MixedStructure, PolyMatrix, StructureKind,
};
use crate::rht::{bch, gauge_act, homotopy_groups, mc_check, pi3_formula, validate_algebra, GCAlgebra, NilpotentDGLA};
use crate::scalars::{q_parse, Q};

use schema::{matrix_rows, Document, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Rees,
    SplitMhs,
    BundleType,
    Homotopy,
    Pi3,
    Pi4,
    McGauge,
    KahlerValidate,
    Formality,
    Monodromy,
    Deligne,
    Archimedean,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Validate,
        Command::Rees,
        Command::SplitMhs,
        Command::BundleType,
        Command::Homotopy,
        Command::Pi3,
        Command::Pi4,
        Command::McGauge,
        Command::KahlerValidate,
        Command::Formality,
        Command::Monodromy,
        Command::Deligne,
        Command::Archimedean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Rees => "rees",
            Command::SplitMhs => "split-mhs",
            Command::BundleType => "bundle-type",
            Command::Homotopy => "homotopy",
            Command::Pi3 => "pi3",
            Command::Pi4 => "pi4",
            Command::McGauge => "mc-gauge",
            Command::KahlerValidate => "kahler-validate",
            Command::Formality => "formality",
            Command::Monodromy => "monodromy",
            Command::Deligne => "deligne",
            Command::Archimedean => "archimedean",
        }
    }

    /// Document kind a fixture is resolved to; `None` keeps its own kind.
    fn fixture_kind(self) -> Option<&'static str> {
        match self {
            Command::Validate => None,
            Command::Rees => Some("filtration"),
            Command::SplitMhs | Command::BundleType => Some("mhs"),
            Command::Homotopy | Command::Pi3 => Some("algebra"),
            Command::Pi4 | Command::KahlerValidate | Command::Formality | Command::Monodromy => Some("package"),
            Command::McGauge => Some("dgla"),
            Command::Deligne | Command::Archimedean => Some("diamond"),
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Options {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// `max_degree,r_min,r_max`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    /// Specializations `u,v,x,y` separated by `;`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Path(PathBuf),
    Fixture(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub input: Input,
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub version: String,
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: Command,
    pub status: Status,
    pub payload: Value,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Serialized document of a fixture, as it would appear in an input file.
pub fn fixture_document(name: &str, kind: Option<&str>) -> Result<Document> {
    let f = fixtures::fixture(name)?;
    match kind {
        Some(k) => f.document_of_kind(k),
        None => Ok(f.document()),
    }
}

pub fn document_to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn load(job: &JobSpec) -> Result<(Vec<u8>, Document)> {
    let bytes = match &job.input {
        Input::Path(p) => std::fs::read(p).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?,
        Input::Fixture(name) => document_to_json(&fixture_document(name, job.command.fixture_kind())?).into_bytes(),
    };
    let doc = serde_json::from_slice(&bytes).map_err(|e| Error::Invalid(format!("schema violation: {e}")))?;
    Ok((bytes, doc))
}

/// Runs a job. Malformed input and violated preconditions are errors; a
/// mathematical failure yields a report with status `fail`.
pub fn run(job: &JobSpec) -> Result<Report> {
    let (bytes, doc) = load(job)?;
    let (status, payload) = match dispatch(job.command, &doc, &job.options) {
        Ok((passed, payload)) => (if passed { Status::Pass } else { Status::Fail }, payload),
        Err(e) if e.is_math_failure() => (Status::Fail, json!({ "error": e.to_string() })),
        Err(e) => return Err(e),
    };
    Ok(Report {
        command: job.command,
        status,
        payload,
        provenance: Provenance {
            input_sha256: sha256_hex(&bytes),
            version: env!("CARGO_PKG_VERSION").to_string(),
            options: job.options.clone(),
        },
    })
}

fn wrong_kind(cmd: Command, doc: &Document, expected: &str) -> Error {
    Error::Invalid(format!("`{}` needs a {expected} document, got {}", cmd.name(), doc.kind()))
}

fn as_algebra(cmd: Command, doc: &Document) -> Result<GCAlgebra> {
    match doc {
        Document::Algebra(a) => a.build(),
        Document::Package(p) => Ok(p.build()?.algebra().clone()),
        _ => Err(wrong_kind(cmd, doc, "algebra or package")),
    }
}

fn as_package(cmd: Command, doc: &Document) -> Result<KahlerPackage> {
    match doc {
        Document::Package(p) => p.build(),
        _ => Err(wrong_kind(cmd, doc, "package")),
    }
}

fn as_mhs(cmd: Command, doc: &Document) -> Result<MixedStructure> {
    match doc {
        Document::Mhs(m) => m.build(),
        _ => Err(wrong_kind(cmd, doc, "mhs")),
    }
}

fn as_diamond(cmd: Command, doc: &Document) -> Result<HodgeDiamond> {
    match doc {
        Document::Diamond(d) => d.build(),
        Document::Package(p) => fixtures::diamond_of(&p.build()?),
        _ => Err(wrong_kind(cmd, doc, "diamond or package")),
    }
}

fn as_dgla(cmd: Command, doc: &Document) -> Result<(NilpotentDGLA, SparseVec<Q>, SparseVec<Q>)> {
    match doc {
        Document::Dgla(d) => d.build(),
        _ => Err(wrong_kind(cmd, doc, "dgla")),
    }
}

fn rats(v: &[Q]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn poly_matrix(m: &PolyMatrix) -> Value {
    json!(m.coeffs().iter().map(matrix_rows).collect::<Vec<_>>())
}

fn sparse(v: &SparseVec<Q>) -> Value {
    json!(v.iter().map(|(i, c)| (*i, Rat(c.clone()))).collect::<Vec<_>>())
}

fn pairs<K: Serialize, V: Serialize>(m: impl IntoIterator<Item = (K, V)>) -> Value {
    json!(m.into_iter().collect::<Vec<_>>())
}

pub fn parse_window(s: &str) -> Result<WeightWindow> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Invalid(format!("window `{s}` is not `max_degree,r_min,r_max`"));
    let [d, lo, hi] = parts.as_slice() else {
        return Err(bad());
    };
    Ok(WeightWindow {
        max_degree: d.parse().map_err(|_| bad())?,
        r_min: lo.parse().map_err(|_| bad())?,
        r_max: hi.parse().map_err(|_| bad())?,
    })
}

pub fn parse_points(s: &str) -> Result<Vec<[Q; 4]>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v: Vec<Q> = p
                .split(',')
                .map(|x| q_parse(x.trim()).map_err(|_| Error::Invalid(format!("bad rational `{x}`"))))
                .collect::<Result<_>>()?;
            <[Q; 4]>::try_from(v).map_err(|_| Error::Invalid(format!("point `{p}` needs four entries u,v,x,y")))
        })
        .collect()
}

fn mhs_payload(m: &MixedStructure) -> Result<(bool, Value)> {
    let opp = check_opposedness(m);
    let mut out = json!({ "structure": m.kind(), "dim": m.dim(), "opposed": opp.opposed, "violations": opp.violations });
    let mut ok = opp.opposed;
    if opp.opposed {
        out["hodge_numbers"] = pairs(hodge_numbers(m)?);
    }
    if m.kind() == StructureKind::Mts {
        let valid = is_valid_mts(m);
        out["valid_mts"] = json!(valid);
        out["bundle_type"] = pairs(bundle_type(m));
        ok &= valid;
    }
    Ok((ok, out))
}

fn package_payload(p: &KahlerPackage) -> (bool, Value) {
    let r = validate_package(p);
    let out = json!({
        "dim": p.dim(),
        "valid": r.valid,
        "checks": r.checks,
        "hodge_numbers": pairs(p.hodge_numbers()),
        "green_nonzero": !p.green().is_zero(),
    });
    (r.valid, out)
}

fn dgla_payload(l: &NilpotentDGLA, omega: &SparseVec<Q>, gauge: &SparseVec<Q>) -> Result<(bool, Value)> {
    let failures = l.validate();
    if !failures.is_empty() {
        return Ok((false, json!({ "valid": false, "failures": failures })));
    }
    let omega_mc = mc_check(l, omega)?;
    let acted = gauge_act(l, gauge, omega)?;
    let acted_mc = mc_check(l, &acted)?;
    let twice = gauge_act(l, gauge, &acted)?;
    let law = gauge_act(l, &bch(l, gauge, gauge)?, omega)? == twice;
    let ok = omega_mc && acted_mc && law;
    Ok((
        ok,
        json!({
            "valid": true,
            "dim": l.dim(),
            "omega_is_mc": omega_mc,
            "gauge_image": sparse(&acted),
            "image_is_mc": acted_mc,
            "action_law": law,
        }),
    ))
}

fn dispatch(cmd: Command, doc: &Document, opts: &Options) -> Result<(bool, Value)> {
    match cmd {
        Command::Validate => match doc {
            Document::Filtration(_) => dispatch(Command::Rees, doc, opts),
            Document::Mhs(m) => mhs_payload(&m.build()?),
            Document::Algebra(a) => {
                let r = validate_algebra(&a.build()?);
                Ok((r.valid, json!(r)))
            }
            Document::Package(p) => Ok(package_payload(&p.build()?)),
            Document::Diamond(d) => {
                let h = d.build()?;
                let betti: Vec<usize> = (0..=2 * h.dim() as i64).map(|m| h.betti(m)).collect();
                Ok((true, json!({ "n": h.dim(), "betti": betti })))
            }
            Document::Dgla(_) => {
                let (l, o, g) = as_dgla(cmd, doc)?;
                dgla_payload(&l, &o, &g)
            }
        },
        Command::Rees => {
            let Document::Filtration(fd) = doc else {
                return Err(wrong_kind(cmd, doc, "filtration"));
            };
            let (v, f, sigma) = fd.build()?;
            let mut out = json!({ "rees_jumps": rees_jumps(&v, &f)?, "graded_dims": pairs(f.jumps()) });
            let mut ok = true;
            if let Some(n) = fd.weight {
                ok = is_pure_hodge(&v, &f, &sigma, n);
                out["pure_of_weight"] = json!(n);
                out["pure"] = json!(ok);
            }
            Ok((ok, out))
        }
        Command::SplitMhs => {
            let m = as_mhs(cmd, doc)?;
            let cert = s_split(&m)?;
            let verified = verify_splitting(&m, &cert);
            Ok((
                verified,
                json!({
                    "verified": verified,
                    "weights": cert.weights,
                    "lifts": matrix_rows(&cert.lifts),
                    "phi": poly_matrix(&cert.phi),
                }),
            ))
        }
        Command::BundleType => {
            let m = as_mhs(cmd, doc)?;
            let m = if m.kind() == StructureKind::Mts { m } else { mts_underlying(&m)? };
            let valid = is_valid_mts(&m);
            Ok((valid, json!({ "valid_mts": valid, "bundle_type": pairs(bundle_type(&m)) })))
        }
        Command::Homotopy => {
            let a = as_algebra(cmd, doc)?;
            let n_max = opts.n_max.unwrap_or(3);
            let h1 = a.cohomology().0.indices_of_degree(1).len();
            let hg = homotopy_groups(&a, n_max, (h1 != 0).then_some(n_max + 1))?;
            Ok((true, json!({ "groups": hg.groups, "word_length": hg.word_length, "stable": hg.stable })))
        }
        Command::Pi3 => {
            let a = as_algebra(cmd, doc)?;
            let formula = pi3_formula(&a)?;
            let bar = homotopy_groups(&a, opts.n_max.unwrap_or(3).max(3), None)?.dim(3);
            Ok((formula.dim == bar, json!({ "formula": formula, "bar_dim": bar, "agree": formula.dim == bar })))
        }
        Command::Pi4 => {
            let p = as_package(cmd, doc)?;
            let s = pi4_structure(&p)?;
            let (c, l, k) = (s.c_basis.len(), s.l_basis.len(), s.k_basis.len());
            let bar = homotopy_groups(p.algebra(), opts.n_max.unwrap_or(4).max(4), None)?.dim(4);
            let agree = c + l + k == bar;
            Ok((
                agree,
                json!({
                    "c": c,
                    "l": l,
                    "k": k,
                    "bar_dim": bar,
                    "agree": agree,
                    "split": s.split(),
                    "alpha": matrix_rows(&s.alpha),
                    "c_basis": s.c_basis.iter().map(|v| rats(v)).collect::<Vec<_>>(),
                    "six_term_vanishes": s.six_term.is_zero(),
                }),
            ))
        }
        Command::McGauge => {
            let (l, o, g) = as_dgla(cmd, doc)?;
            dgla_payload(&l, &o, &g)
        }
        Command::KahlerValidate => Ok(package_payload(&as_package(cmd, doc)?)),
        Command::Formality => {
            let p = as_package(cmd, doc)?;
            let extra = opts.points.as_deref().map(parse_points).transpose()?.unwrap_or_default();
            let z = formality_zigzag_at(&p, &extra)?;
            Ok((z.holds, json!(z)))
        }
        Command::Monodromy => {
            let p = as_package(cmd, doc)?;
            let n_max = opts.n_max.unwrap_or(3);
            let r = monodromy(&p, n_max)?;
            let ok = r.closed_matches && r.low_lengths_vanish && r.gamma_vanishes;
            let mut out = json!(r);
            if n_max >= 3 {
                let s = restrict_to_s(&p, 3, n_max)?;
                out["pi3_restriction"] = json!({ "classes": s.classes.len(), "split": s.split, "truncated": s.truncated });
            }
            Ok((ok, out))
        }
        Command::Deligne => {
            let h = as_diamond(cmd, doc)?;
            let rows = deligne_table(&h);
            let agree = rows.iter().all(|r| r.seq == r.split);
            Ok((agree, json!({ "n": h.dim(), "agree": agree, "rows": rows })))
        }
        Command::Archimedean => {
            let h = as_diamond(cmd, doc)?;
            let w = parse_window(opts.window.as_deref().unwrap_or("3,-3,3"))?;
            let series = (0..=2 * h.dim() as i64)
                .map(|q| Ok(json!({ "q": q, "series": archimedean_hilbert(&h, q, &w)? })))
                .collect::<Result<Vec<_>>>()?;
            let cone = rjc_cone_check(&normal_monomials(w.max_degree))?;
            Ok((cone.passed, json!({ "window": w, "degrees": series, "cone": cone })))
        }
    }
}

/// Exit code of a failed job: 1 for a mathematical failure, 2 for bad input.
pub fn error_exit_code(e: &Error) -> i32 {
    if e.is_math_failure() {
        1
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(cmd: Command, fixture: &str, opts: Options) -> JobSpec {
        JobSpec { command: cmd, input: Input::Fixture(fixture.into()), options: Options { fixture: Some(fixture.into()), ..opts } }
    }

    fn ok(cmd: Command, fixture: &str) -> Report {
        run(&job(cmd, fixture, Options::default())).unwrap()
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
            assert_eq!(serde_json::to_value(c).unwrap(), json!(c.name()));
        }
        assert!("fly".parse::<Command>().is_err());
    }

    #[test]
    fn validate_split_fixture_reports_hodge_numbers() {
        let r = ok(Command::Validate, "elliptic-h1");
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.payload["hodge_numbers"], json!([[[0, 1], 1], [[1, 0], 1]]));
        let r = ok(Command::Validate, "s-truncation");
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn homotopy_of_k3() {
        let r = ok(Command::Homotopy, "k3");
        assert_eq!(r.status, Status::Pass);
        let dims: Vec<u64> = r.payload["groups"].as_array().unwrap().iter().map(|g| g["dim"].as_u64().unwrap()).collect();
        assert_eq!(dims, vec![22, 252]);
        assert_eq!(ok(Command::Pi3, "k3").payload["formula"]["dim"], json!(252));
    }

    #[test]
    fn deligne_of_elliptic_curve() {
        let r = ok(Command::Deligne, "elliptic");
        assert_eq!(r.status, Status::Pass);
        let rows = r.payload["rows"].as_array().unwrap();
        let row = rows.iter().find(|x| x["m"] == json!(2) && x["a"] == json!(1)).unwrap();
        assert_eq!(row["seq"], json!(1));
    }

    #[test]
    fn reports_are_deterministic() {
        for (c, f) in [(Command::Monodromy, "twisted-extension"), (Command::SplitMhs, "tate-stack"), (Command::Archimedean, "proj-plane")] {
            assert_eq!(ok(c, f).to_json(), ok(c, f).to_json());
        }
    }

    #[test]
    fn commands_on_fixtures() {
        let cases = [
            (Command::Validate, "k3", Status::Pass),
            (Command::Validate, "nilpotent-interval", Status::Pass),
            (Command::SplitMhs, "tate-stack", Status::Pass),
            (Command::SplitMhs, "s-truncation", Status::Fail),
            (Command::BundleType, "elliptic-h1", Status::Pass),
            (Command::Pi4, "proj-plane", Status::Pass),
            (Command::Pi4, "twisted-extension", Status::Pass),
            (Command::McGauge, "nilpotent-interval", Status::Pass),
            (Command::KahlerValidate, "tensor(elliptic,elliptic)", Status::Pass),
            (Command::Formality, "acyclic-square", Status::Pass),
            (Command::Monodromy, "sphere2", Status::Pass),
            (Command::Archimedean, "point", Status::Pass),
        ];
        for (c, f, s) in cases {
            assert_eq!(ok(c, f).status, s, "{} {f}", c.name());
        }
        let r = ok(Command::Pi4, "twisted-extension");
        assert_eq!((r.payload["c"].clone(), r.payload["k"].clone(), r.payload["split"].clone()), (json!(1), json!(2), json!(false)));
    }

    #[test]
    fn input_errors() {
        let e = run(&job(Command::Homotopy, "tate(1)", Options::default())).unwrap_err();
        assert_eq!(error_exit_code(&e), 2);
        let e = run(&job(Command::Pi3, "nowhere", Options::default())).unwrap_err();
        assert_eq!(error_exit_code(&e), 2);
        let bad = JobSpec { command: Command::Validate, input: Input::Path("/nonexistent.json".into()), options: Options::default() };
        assert_eq!(error_exit_code(&run(&bad).unwrap_err()), 2);
        assert!(parse_window("1,2").is_err());
        assert!(parse_points("1,0,0").is_err());
        assert_eq!(parse_points("1,0,0,1; 2,3,1,2").unwrap().len(), 2);
    }

    #[test]
    fn extra_points_must_lie_on_sl2() {
        let opts = Options { points: Some("1,1,1,1".into()), ..Options::default() };
        assert!(run(&job(Command::Formality, "sphere2", opts)).is_err());
    }
}
