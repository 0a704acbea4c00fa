mod common;

use hodge_homotopy::mhs::{
    bundle_type, check_opposedness, hodge_numbers, is_torsor_element, is_valid_mts, mts_underlying, s_split,
    splitting_difference, tate_twist, verify_splitting,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_structures_split(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let m = common::random_mhs(&mut r, 6, 3);
        prop_assert!(check_opposedness(&m).opposed);
        let c = s_split(&m).unwrap();
        prop_assert!(verify_splitting(&m, &c));
        let p = common::random_permutation(&mut r, m.dim());
        let c2 = s_split(&m.change_basis(&p).unwrap()).unwrap().pull_back(&p).unwrap();
        prop_assert!(verify_splitting(&m, &c2));
        let g = splitting_difference(&m, &c, &c2).unwrap();
        prop_assert!(is_torsor_element(&m, &c.lifts, &c.weights, &g));
    }

    #[test]
    fn hodge_numbers_are_symmetric(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let m = common::random_mhs(&mut r, 6, 3);
        let h = hodge_numbers(&m).unwrap();
        prop_assert_eq!(h.values().sum::<usize>(), m.dim());
        for (&(p, q), &v) in &h {
            prop_assert_eq!(h.get(&(q, p)).copied(), Some(v));
        }
    }

    #[test]
    fn opposedness_survives_basis_change(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let m = common::random_mhs(&mut r, 5, 3);
        let g = common::random_gl(&mut r, m.dim());
        let n = m.change_basis(&g).unwrap();
        prop_assert!(check_opposedness(&n).opposed);
        prop_assert_eq!(hodge_numbers(&n).unwrap(), hodge_numbers(&m).unwrap());
    }

    #[test]
    fn twisted_structures_have_pure_slopes(seed in any::<u64>(), k in -2i64..=2) {
        let mut r = common::rng(seed);
        let m = tate_twist(&common::random_mhs(&mut r, 5, 2), k);
        let t = mts_underlying(&m).unwrap();
        prop_assert!(is_valid_mts(&t));
        for (n, slopes) in bundle_type(&t) {
            prop_assert!(slopes.iter().all(|&s| s == n));
        }
    }
}
