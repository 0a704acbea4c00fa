//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. All comparisons are exact; the only tolerances are wall-clock
//! budgets, pinned below.

mod common;

use std::time::{Duration, Instant};

use hodge_homotopy::cli::fixtures as named;
use hodge_homotopy::dcoh::{deligne_dim_seq, deligne_dim_split, deligne_table, HodgeDiamond};
use hodge_homotopy::kahler::fixtures::*;
use hodge_homotopy::kahler::{monodromy, pi4_structure, restrict_to_s, two_types_family, validate_package, KahlerPackage};
use hodge_homotopy::linalg::SparseVec;
use hodge_homotopy::mhs::{
    check_opposedness, is_torsor_element, s_split, splitting_difference, verify_splitting,
};
use hodge_homotopy::rht::{
    bar_truncated, bch, chevalley_eilenberg, fixtures as rings, free_nilpotent, gauge_act, homotopy_groups, mc_check,
    pi3_formula, validate_algebra, GCAlgebra, NilpotentDGLA,
};
use hodge_homotopy::scalars::{q_int, Field, Q};
use rand::Rng;

const K3_BUDGET: Duration = Duration::from_secs(60);
const SPLIT_BUDGET: Duration = Duration::from_secs(1);
const RANDOM_MHS: usize = 100;
const GL2_PER_FIXTURE: usize = 20;
const RANDOM_DIAMONDS: usize = 50;
const MC_INSTANCES: usize = 1000;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixtures() -> Vec<(&'static str, KahlerPackage)> {
    vec![
        ("point", point()),
        ("sphere2", sphere2()),
        ("proj-plane", projective_plane()),
        ("k3", k3()),
        ("elliptic", elliptic()),
        ("acyclic-square", acyclic_square(0)),
        ("acyclic-square(1)", acyclic_square(1)),
        ("twisted-extension", twisted_extension()),
        ("formal(1;0,0;0,2,0;0,0,0,0;0,0,1,0,0)", formal_diamond(&[vec![1], vec![0, 0], vec![0, 2, 0], vec![0; 4], vec![0, 0, 1, 0, 0]]).unwrap()),
        ("tensor(elliptic,elliptic)", tensor(&elliptic(), &elliptic()).unwrap()),
        ("tensor(sphere2,acyclic-square(1))", tensor(&sphere2(), &acyclic_square(1)).unwrap()),
    ]
}

fn betti(a: &GCAlgebra, top: u32) -> Vec<usize> {
    let (h, _) = a.cohomology();
    (0..=top).map(|k| h.indices_of_degree(k).len()).collect()
}

fn criterion_1() -> Outcome {
    let s2 = rings::sphere(2);
    let hg = homotopy_groups(&s2, 3, None).map_err(|e| e.to_string())?;
    let f = pi3_formula(&s2).map_err(|e| e.to_string())?;
    check(hg.dim(2) == 1 && hg.dim(3) == 1 && f.dim == 1, || {
        format!("S²: π₂ = {}, π₃ = {} (bar), {} (formula)", hg.dim(2), hg.dim(3), f.dim)
    })?;
    let k3 = rings::k3();
    let t = Instant::now();
    let hg = homotopy_groups(&k3, 3, Some(4)).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let f = pi3_formula(&k3).map_err(|e| e.to_string())?;
    check(hg.dim(3) == 252 && f.dim == 252 && f.sym2_kernel == 252, || {
        format!("K3: π₃ = {} (bar), {} (formula)", hg.dim(3), f.dim)
    })?;
    check(elapsed < K3_BUDGET, || format!("K3 took {elapsed:?}"))?;
    Ok(format!("S² π₂ = π₃ = 1; K3 π₃ = 252 both ways, bar at word length 4 in {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let p = projective_plane();
    let s = pi4_structure(&p).map_err(|e| e.to_string())?;
    let (c, l, k) = (s.c_basis.len(), s.l_basis.len(), s.k_basis.len());
    let bar = homotopy_groups(p.algebra(), 4, None).map_err(|e| e.to_string())?.dim(4);
    check(c == 0 && l == 0 && k == 0 && bar == 0, || format!("C, L, K = {c}, {l}, {k}; bar π₄ = {bar}"))?;
    Ok("ℙ²: C = L = K = 0 and bar π₄ = 0".into())
}

fn criterion_3() -> Outcome {
    let mut r = common::rng(2024);
    let mut slowest = Duration::ZERO;
    for i in 0..RANDOM_MHS {
        let m = common::random_mhs(&mut r, 6, 3);
        let t = Instant::now();
        let c = s_split(&m).map_err(|e| format!("instance {i}: {e}"))?;
        let ok = verify_splitting(&m, &c);
        let elapsed = t.elapsed();
        slowest = slowest.max(elapsed);
        check(ok, || format!("instance {i}: splitting does not verify"))?;
        check(elapsed < SPLIT_BUDGET, || format!("instance {i}: {elapsed:?}"))?;
        let p = common::random_permutation(&mut r, m.dim());
        let c2 = s_split(&m.change_basis(&p).map_err(|e| e.to_string())?)
            .and_then(|c| c.pull_back(&p))
            .map_err(|e| format!("instance {i}, permuted: {e}"))?;
        let g = splitting_difference(&m, &c, &c2).map_err(|e| e.to_string())?;
        check(is_torsor_element(&m, &c.lifts, &c.weights, &g), || format!("instance {i}: difference outside id + W₋₁γ⁰"))?;
    }
    Ok(format!("{RANDOM_MHS} structures split and verify, torsor law holds, slowest {:.0}ms", slowest.as_secs_f64() * 1e3))
}

fn criterion_4() -> Outcome {
    let s = named::mhs("s-truncation").map_err(|e| e.to_string())?;
    let opp = check_opposedness(&s);
    check(!opp.opposed, || "truncation passes opposedness".into())?;
    let mut pure = vec![named::mhs("elliptic-h1").unwrap(), named::mhs("tate(1)").unwrap(), named::mhs("tate(-2)").unwrap()];
    let mut r = common::rng(4);
    for _ in 0..50 {
        pure.push(common::random_mhs(&mut r, 6, 1));
    }
    for (i, m) in pure.iter().enumerate() {
        check(check_opposedness(m).opposed, || format!("pure structure {i} fails opposedness"))?;
    }
    Ok(format!("truncation fails with {} violations; {} pure structures pass", opp.violations.len(), pure.len()))
}

fn random_gl2(r: &mut impl Rng) -> [[Q; 2]; 2] {
    loop {
        let m = [[0; 2]; 2].map(|row| row.map(|_: i32| q_int(r.gen_range(-3..=3))));
        let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
        if !det.is_zero() {
            return m;
        }
    }
}

fn criterion_5() -> Outcome {
    let mut r = common::rng(5);
    let list = fixtures();
    for (name, p) in &list {
        let rep = validate_package(p);
        check(rep.valid, || {
            let failed: Vec<&str> = rep.failures().iter().map(|c| c.name.as_str()).collect();
            format!("{name}: {failed:?}")
        })?;
        for _ in 0..GL2_PER_FIXTURE {
            let m = random_gl2(&mut r);
            let holds = two_types_family(p, m.clone()).map_err(|e| e.to_string())?;
            check(holds, || format!("{name}: two types fails for {m:?}"))?;
        }
    }
    Ok(format!("{} fixtures valid; {GL2_PER_FIXTURE} random GL₂(ℚ) matrices each", list.len()))
}

fn criterion_6() -> Outcome {
    let list = fixtures();
    let mut split_checked = 0;
    for (name, p) in &list {
        let r = monodromy(p, 3).map_err(|e| format!("{name}: {e}"))?;
        check(r.low_lengths_vanish, || format!("{name}: word lengths 1 and 2 do not vanish"))?;
        check(r.gamma_vanishes, || format!("{name}: γ does not vanish"))?;
        check(r.closed_matches, || format!("{name}: closed form differs from the pipeline"))?;
        if p.d().is_zero() {
            check(r.is_zero(), || format!("{name}: formal package with α ≠ 0"))?;
        }
        if p.algebra().indices_of_degree(1).is_empty() {
            let s = restrict_to_s(p, 3, 3).map_err(|e| format!("{name}: {e}"))?;
            check(s.split, || format!("{name}: π₃ restriction is not split"))?;
            split_checked += 1;
        }
    }
    Ok(format!("{} fixtures at N_max = 3; π₃ split on {split_checked} simply connected ones", list.len()))
}

fn random_diamond(r: &mut impl Rng) -> HodgeDiamond {
    let n: u32 = r.gen_range(0..=4);
    let mut h = std::collections::BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            if h.contains_key(&(p, q)) {
                continue;
            }
            let v = if p == q && (p == 0 || p == n) { 1 } else { r.gen_range(0..=3) };
            // Orbit under Hodge symmetry and Serre duality.
            for key in [(p, q), (q, p), (n - p, n - q), (n - q, n - p)] {
                h.insert(key, v);
            }
        }
    }
    HodgeDiamond::new(n, h).expect("symmetric")
}

fn criterion_7() -> Outcome {
    let mut r = common::rng(7);
    let mut rows = 0;
    for i in 0..RANDOM_DIAMONDS {
        let h = random_diamond(&mut r);
        for row in deligne_table(&h) {
            check(row.seq == row.split, || format!("diamond {i}: {row:?}"))?;
            rows += 1;
        }
        for m in 0..=2 * h.dim() as i64 {
            for a in -2..=0 {
                check(deligne_dim_seq(&h, m, a) == h.betti(m), || format!("diamond {i}: a = {a}, m = {m}"))?;
                check(deligne_dim_split(&h, m, a) == h.betti(m), || format!("diamond {i}: a = {a}, m = {m}"))?;
            }
        }
    }
    let e = deligne_dim_seq(&HodgeDiamond::elliptic_curve(), 2, 1);
    let p1 = deligne_dim_seq(&HodgeDiamond::projective_space(1), 2, 1);
    check(e == 1 && p1 == 1, || format!("elliptic (2,1) = {e}, ℙ¹ (2,1) = {p1}"))?;
    Ok(format!("{RANDOM_DIAMONDS} diamonds, {rows} (m, a) pairs agree; a ≤ 0 gives b_m; elliptic and ℙ¹ (2,1) = 1"))
}

fn criterion_8() -> Outcome {
    let mut done = Vec::new();
    for (name, p) in fixtures() {
        let a = p.algebra();
        if a.dim() > 8 {
            continue;
        }
        if a.indices_of_degree(0).len() != 1 {
            // The bar construction needs a connected algebra.
            continue;
        }
        // With H¹ ≠ 0 the model is the Malcev Lie algebra of π₁ (degree 0),
        // which recovers H* for the aspherical fixtures.
        let aspherical = !a.indices_of_degree(1).is_empty();
        let (top, bound) = if aspherical { (0, a.max_degree() + 1) } else { (4, 6) };
        let bar = bar_truncated(a, 6, 5).map_err(|e| format!("{name}: {e}"))?;
        let g = bar.to_dgla(top).map_err(|e| format!("{name}: {e}"))?;
        check(g.validate().is_empty(), || format!("{name}: G(A) is not a DGLA"))?;
        let w = chevalley_eilenberg(&g, bound).map_err(|e| format!("{name}: {e}"))?;
        check(validate_algebra(&w).valid, || format!("{name}: W̄ is not an algebra"))?;
        let (got, want) = (betti(&w, 5), betti(a, 5));
        check(got == want, || format!("{name}: {got:?} ≠ {want:?}"))?;
        done.push(name);
    }
    Ok(format!("H* agrees in degrees ≤ 5 on {}", done.join(", ")))
}

fn random_element(r: &mut impl Rng, idx: &[usize]) -> SparseVec<Q> {
    let mut v = SparseVec::new();
    for &i in idx {
        let c = r.gen_range(-2..=2);
        if c != 0 && r.gen_bool(0.4) {
            v.insert(i, q_int(c));
        }
    }
    v
}

fn criterion_9() -> Outcome {
    let mut algebras: Vec<NilpotentDGLA> = Vec::new();
    for (degrees, class) in [(vec![0, 0], 1), (vec![0, 0], 2), (vec![0, 0], 3), (vec![0, 0, 0], 2), (vec![0, 0, 0], 3)] {
        for k in 1..=2 {
            let l = free_nilpotent(&degrees, class).and_then(|g| g.tensor(&rings::interval_forms(k)));
            algebras.push(l.map_err(|e| e.to_string())?);
        }
    }
    let mut r = common::rng(9);
    let mut nontrivial = 0;
    for i in 0..MC_INSTANCES {
        let l = &algebras[i % algebras.len()];
        check(l.class() <= 3, || format!("instance {i}: class {}", l.class()))?;
        let deg0 = l.indices_of_degree(0);
        let (a, b, c) = (random_element(&mut r, &deg0), random_element(&mut r, &deg0), random_element(&mut r, &deg0));
        let fail = |e: hodge_homotopy::Error| format!("instance {i}: {e}");
        let omega = gauge_act(l, &c, &SparseVec::new()).map_err(fail)?;
        check(mc_check(l, &omega).map_err(fail)?, || format!("instance {i}: ω is not Maurer–Cartan"))?;
        let b_omega = gauge_act(l, &b, &omega).map_err(fail)?;
        check(mc_check(l, &b_omega).map_err(fail)?, || format!("instance {i}: b·ω is not Maurer–Cartan"))?;
        let ab_omega = gauge_act(l, &a, &b_omega).map_err(fail)?;
        let direct = gauge_act(l, &bch(l, &a, &b).map_err(fail)?, &omega).map_err(fail)?;
        check(ab_omega == direct, || format!("instance {i}: a·(b·ω) ≠ bch(a, b)·ω"))?;
        nontrivial += usize::from(!omega.is_empty() && b_omega != omega);
    }
    Ok(format!("{MC_INSTANCES} instances on {} algebras of class ≤ 3, {nontrivial} with nontrivial ω and action", algebras.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("π₃ formula", criterion_1),
        ("π₄ consistency", criterion_2),
        ("𝒮-splitting", criterion_3),
        ("opposedness negative control", criterion_4),
        ("Kähler identity suite", criterion_5),
        ("monodromy", criterion_6),
        ("Deligne oracle equivalence", criterion_7),
        ("round trip", criterion_8),
        ("MC/gauge", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
