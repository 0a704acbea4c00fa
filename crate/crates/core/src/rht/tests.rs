use super::fixtures::*;
use super::*;
use crate::linalg::SparseVec;
use crate::scalars::{q_int, Field, Q};

fn s2xs2() -> GCAlgebra {
    sphere(2).tensor(&sphere(2))
}

#[test]
fn unit_only_gives_zero_complex() {
    let a = GCAlgebra::new(vec![BasisElement::new("1", 0)], 0, &[], &[], true).unwrap();
    let bar = bar_construction(&a, 3).unwrap();
    assert!(bar.generators().is_empty());
    assert!(bar.lie().blocks().is_empty());
}

#[test]
fn sphere_bar_pieces() {
    let bar = bar_construction(&sphere(2), 3).unwrap();
    assert_eq!(bar.generators().len(), 1);
    assert_eq!(bar.generators()[0].degree, 1);
    let dims = bar.lie().dims_by_length();
    assert_eq!(dims.get(&(2, 2)), Some(&1));
    assert_eq!(dims.get(&(3, 3)), None);
    // h² = 0 so the differential vanishes.
    for (_, b) in bar.lie().blocks() {
        for t in b.basis() {
            assert!(bar.differential(t).is_zero());
        }
    }
}

#[test]
fn projective_plane_coproduct() {
    let a = projective_space(2);
    let bar = bar_construction(&a, 3).unwrap();
    let f = bar.generators().iter().position(|g| g.source == 2).unwrap();
    let df = bar.differential(&Tensor::generator(f as u16));
    assert!(!df.is_zero());
    assert_eq!(df.min_length(), Some(2));
}

#[test]
fn non_connected_rejected() {
    assert!(matches!(bar_construction(&interval_forms(2), 2), Err(crate::Error::NotConnected(_))));
}

#[test]
fn sphere_homotopy() {
    let h = homotopy_groups(&sphere(2), 5, None).unwrap();
    assert!(h.stable);
    let dims: Vec<usize> = (2..=5).map(|n| h.dim(n)).collect();
    assert_eq!(dims, vec![1, 1, 0, 0]);
    assert_eq!(h.group(3).unwrap().by_type.get("(2,2)"), Some(&1));
    let odd = homotopy_groups(&sphere(3), 6, None).unwrap();
    assert_eq!((2..=6).map(|n| odd.dim(n)).collect::<Vec<_>>(), vec![0, 1, 0, 0, 0]);
}

#[test]
fn projective_plane_homotopy() {
    let h = homotopy_groups(&projective_space(2), 5, None).unwrap();
    assert_eq!((2..=5).map(|n| h.dim(n)).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
}

#[test]
fn product_of_spheres() {
    let h = homotopy_groups(&s2xs2(), 4, None).unwrap();
    assert_eq!((2..=4).map(|n| h.dim(n)).collect::<Vec<_>>(), vec![2, 2, 0]);
    assert_eq!(pi3_formula(&s2xs2()).unwrap().dim, 2);
}

#[test]
fn acyclic_factor_changes_nothing() {
    let a = sphere(2).tensor(&acyclic_pair(2));
    assert_eq!(grading_none(&a), true);
    let h = homotopy_groups(&a, 4, None).unwrap();
    assert_eq!((2..=4).map(|n| h.dim(n)).collect::<Vec<_>>(), vec![1, 1, 0]);
    let t = sphere(2).tensor(&acyclic_pair(3)).tensor(&projective_space(2));
    let h = homotopy_groups(&t, 5, None).unwrap();
    let p = homotopy_groups(&sphere(2).tensor(&projective_space(2)), 5, None).unwrap();
    assert_eq!(h.groups.iter().map(|g| g.dim).collect::<Vec<_>>(), p.groups.iter().map(|g| g.dim).collect::<Vec<_>>());
}

fn grading_none(a: &GCAlgebra) -> bool {
    bar::grading_of(a) == Grading::None
}

#[test]
fn triple_products_square_to_zero() {
    // S²×S²×S² has a nonzero triple product; the differential must still square to zero.
    let a = s2xs2().tensor(&sphere(2));
    let h = homotopy_groups(&a, 4, None).unwrap();
    assert_eq!(h.dim(2), 3);
    assert_eq!(h.dim(3), 3);
}

#[test]
fn pi3_formula_examples() {
    assert_eq!(pi3_formula(&sphere(2)).unwrap().dim, 1);
    assert_eq!(pi3_formula(&projective_space(2)).unwrap().dim, 0);
    assert_eq!(pi3_formula(&sphere(3)).unwrap().dim, 1);
    assert!(pi3_formula(&elliptic()).is_err());
}

#[test]
fn k3_pi3() {
    let a = k3();
    let f = pi3_formula(&a).unwrap();
    assert_eq!((f.h3, f.sym2_kernel), (0, 252));
    let h = homotopy_groups(&a, 3, None).unwrap();
    assert_eq!(h.dim(2), 22);
    assert_eq!(h.dim(3), 252);
    assert_eq!(h.group(3).unwrap().by_type, f.by_type);
    // σ² = 0, so the square of the (2,0) class survives in type (4,0).
    assert_eq!(h.group(3).unwrap().by_type.get("(4,0)"), Some(&1));
    assert_eq!(h.group(3).unwrap().by_type.get("(3,1)"), Some(&20));
}

#[test]
fn whitehead_and_hurewicz_on_sphere() {
    let h = homotopy_groups(&sphere(2), 3, None).unwrap();
    let iota = h.basis_class(2, 0);
    let w = h.whitehead_bracket(&iota, &iota).unwrap();
    assert_eq!(w.n, 3);
    assert!(w.coords.iter().any(|c| !c.is_zero()));
    let zero = PiClass { n: 2, coords: vec![Q::zero()] };
    assert!(h.whitehead_bracket(&zero, &iota).unwrap().coords.iter().all(Field::is_zero));
    let hur = h.hurewicz(&iota).unwrap();
    assert_eq!(hur, vec![Q::zero(), Q::one()]);
    assert!(h.hurewicz(&h.basis_class(3, 0)).unwrap().iter().all(Field::is_zero));
    assert!(h.hurewicz(&zero).unwrap().iter().all(Field::is_zero));
}

fn wedge_of_spheres() -> GCAlgebra {
    let b = vec![BasisElement::typed("1", 0, 0), BasisElement::typed("a", 1, 1), BasisElement::typed("b", 1, 1)];
    GCAlgebra::new(b, 0, &[], &[], true).unwrap()
}

#[test]
fn whitehead_products() {
    // Mixed products vanish on a product of spheres and survive on the wedge.
    let h = homotopy_groups(&s2xs2(), 3, None).unwrap();
    let (a, b) = (h.basis_class(2, 0), h.basis_class(2, 1));
    assert!(h.whitehead_bracket(&a, &b).unwrap().coords.iter().all(Field::is_zero));
    assert!(h.whitehead_bracket(&a, &a).unwrap().coords.iter().any(|c| !c.is_zero()));
    let h = homotopy_groups(&wedge_of_spheres(), 3, None).unwrap();
    assert_eq!(h.dim(3), 3);
    let (a, b) = (h.basis_class(2, 0), h.basis_class(2, 1));
    let ab = h.whitehead_bracket(&a, &b).unwrap();
    let ba = h.whitehead_bracket(&b, &a).unwrap();
    // Both classes sit in odd bar degree, where the bracket is symmetric.
    assert_eq!(ab, ba);
    assert!(ab.coords.iter().any(|c| !c.is_zero()));
}

#[test]
fn euler_bookkeeping() {
    let bar = bar_truncated(&projective_space(3), 6, 6).unwrap();
    for n in 1..6 {
        let c = bar.degree_counts(n).unwrap();
        assert_eq!(c.homology, c.cycles - c.boundaries);
        let out = c.dim - c.cycles;
        let next = bar.degree_counts(n - 1).map_or(out, |p| p.boundaries);
        assert_eq!(out, next);
    }
}

#[test]
fn non_simply_connected_needs_bound() {
    assert!(matches!(homotopy_groups(&elliptic(), 3, None), Err(crate::Error::NotSimplyConnected(2))));
    // Torus: the Malcev Lie algebra is abelian on two classes.
    let h = homotopy_groups(&elliptic(), 2, Some(3)).unwrap();
    assert_eq!(h.dim(1), 2);
    assert!(h.stable);
    assert!(h.group(2).is_none());
}

#[test]
fn ce_abelian_generator() {
    let g = NilpotentDGLA::new(vec!["x".into()], vec![-1], &[], &[]).unwrap();
    let w = chevalley_eilenberg(&g, 6).unwrap();
    assert_eq!(w.dim(), 4);
    assert!(w.has_zero_differential());
    assert!(validate_algebra(&w).valid);
}

#[test]
fn ce_heisenberg() {
    let g = free_nilpotent(&[0, 0], 2).unwrap();
    assert_eq!(g.dim(), 3);
    assert!(g.validate().is_empty());
    let w = chevalley_eilenberg(&g, 3).unwrap();
    assert!(validate_algebra(&w).valid, "{:?}", validate_algebra(&w).failures);
    let z = w.basis().iter().position(|b| b.label.starts_with("L0")).unwrap();
    let dz = w.d_basis(z);
    assert_eq!(dz.len(), 1);
    let (k, _) = dz.iter().next().unwrap();
    assert_eq!(w.degree(*k), 2);
    let (h, _) = w.cohomology();
    let betti: Vec<usize> = (0..=3).map(|k| h.indices_of_degree(k).len()).collect();
    assert_eq!(betti, vec![1, 2, 2, 1]);
}

fn betti(a: &GCAlgebra, top: u32) -> Vec<usize> {
    let (h, _) = a.cohomology();
    (0..=top).map(|k| h.indices_of_degree(k).len()).collect()
}

#[test]
fn round_trip_sphere_and_plane() {
    for a in [sphere(2), projective_space(2), s2xs2(), sphere(3)] {
        let bar = bar_truncated(&a, 6, 5).unwrap();
        let g = bar.to_dgla(4).unwrap();
        assert!(g.validate().is_empty());
        let w = chevalley_eilenberg(&g, 6).unwrap();
        assert!(validate_algebra(&w).valid);
        let expected: Vec<usize> = (0..=5).map(|k| a.indices_of_degree(k).len()).collect();
        assert_eq!(betti(&w, 5), expected);
    }
}

#[test]
fn gauge_basics() {
    let g = free_nilpotent(&[0, 0], 3).unwrap();
    let l = g.tensor(&interval_forms(2)).unwrap();
    assert!(l.validate().is_empty());
    let zero = SparseVec::new();
    assert!(mc_check(&l, &zero).unwrap());
    let deg0 = l.indices_of_degree(0);
    let a: SparseVec<Q> = deg0.iter().take(4).map(|&i| (i, q_int(1))).collect();
    assert_eq!(gauge_act(&l, &zero, &zero).unwrap(), zero);
    let om = gauge_act(&l, &a, &zero).unwrap();
    assert!(mc_check(&l, &om).unwrap());
    assert_eq!(gauge_act(&l, &zero, &om).unwrap(), om);
    assert!(matches!(mc_check(&l, &a), Err(crate::Error::WrongDegree(_))));
}

#[test]
fn gauge_abelian_is_minus_da() {
    let g = NilpotentDGLA::new(vec!["x".into()], vec![0], &[], &[]).unwrap();
    let l = g.tensor(&interval_forms(2)).unwrap();
    let a: SparseVec<Q> = SparseVec::from([(2, q_int(3))]);
    let om = gauge_act(&l, &a, &SparseVec::new()).unwrap();
    let mut da = l.d(&a);
    for v in da.values_mut() {
        *v = -v.clone();
    }
    assert_eq!(om, da);
}

#[test]
fn gauge_law_on_flat_connections() {
    let g = free_nilpotent(&[0, 0], 3).unwrap();
    let l = g.tensor(&interval_forms(1).tensor(&interval_forms(1))).unwrap();
    let deg0 = l.indices_of_degree(0);
    let a: SparseVec<Q> = deg0.iter().step_by(3).map(|&i| (i, q_int(1))).collect();
    let b: SparseVec<Q> = deg0.iter().skip(1).step_by(4).map(|&i| (i, q_int(-2))).collect();
    let w = gauge_act(&l, &b, &SparseVec::new()).unwrap();
    assert!(mc_check(&l, &w).unwrap());
    let lhs = gauge_act(&l, &a, &w).unwrap();
    let rhs = gauge_act(&l, &bch(&l, &a, &b).unwrap(), &SparseVec::new()).unwrap();
    assert_eq!(lhs, rhs);
}
