use super::*;
use crate::exact::{int, IntMat2};
use crate::pillow::make_map;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn map(a: i64, b: i64, c: i64, d: i64) -> LattesTypeMap {
    make_map(IntMat2::from_i64([a, b, c, d])).unwrap()
}

fn test_maps() -> Vec<LattesTypeMap> {
    vec![
        map(2, 0, 0, 2),
        map(2, 0, 0, 3),
        map(1, -2, 1, 1),
        map(2, 1, 0, 2),
        map(0, -2, 1, 0),
        map(2, 1, 1, 3),
        map(3, 1, -1, 2),
        map(3, 1, 1, 2),
    ]
}

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn scalar_two_gives_powers_of_two() {
    let m = map(2, 0, 0, 2);
    for n in 0..=8 {
        assert_eq!(dn_planar(&m, n, &budget()).unwrap(), 1 << n, "n = {n}");
    }
}

#[test]
fn diagonal_two_three_gives_powers_of_two() {
    let m = map(2, 0, 0, 3);
    for n in 0..=5 {
        assert_eq!(dn_planar(&m, n, &budget()).unwrap(), 1 << n, "n = {n}");
    }
}

#[test]
fn level_zero_is_one() {
    for m in test_maps() {
        assert_eq!(dn_planar(&m, 0, &budget()).unwrap(), 1);
        assert_eq!(dn_folded(&m, 0, &budget()).unwrap(), 1);
    }
}

#[test]
fn shear_falls_below_powers_of_two() {
    let m = map(2, 1, 0, 2);
    let mut strictly_below = false;
    for n in 1..=8u32 {
        let dn = dn_planar(&m, n, &budget()).unwrap();
        // ‖L^{-n}‖∞ = 2^{-n}(1 + n/2)
        let lower = Rational::new(int(1) << n, int(1)) / Rational::new(int(2 + i64::from(n)), int(2));
        let (lo, _) = dn_bounds(&m, n).unwrap();
        assert_eq!(lo, lower);
        assert!(dn <= 1 << n);
        strictly_below |= dn < 1 << n;
    }
    assert!(strictly_below);
}

#[test]
fn folded_examples() {
    assert_eq!(dn_folded(&map(2, 0, 0, 2), 3, &budget()).unwrap(), 8);
    assert_eq!(dn_folded(&map(2, 0, 0, 3), 2, &budget()).unwrap(), 4);
}

#[test]
fn folded_and_planar_agree() {
    for m in test_maps() {
        for n in 0..=4 {
            let r = dn_report(&m, n, DnMethod::Both, &budget()).unwrap();
            assert_eq!(r.agreement, Some(true), "{} n = {n}", m.matrix());
        }
    }
}

#[test]
fn open_edges_do_not_shorten_chains() {
    for m in test_maps() {
        for n in 1..=3 {
            let closed = dn_folded_with(&m, n, EdgeConvention::Closed, &budget()).unwrap();
            let open = dn_folded_with(&m, n, EdgeConvention::Open, &budget()).unwrap();
            assert!(open >= closed);
        }
    }
}

#[test]
fn bounds_examples() {
    let r = |p: i64, q: i64| Rational::new(int(p), int(q));
    assert_eq!(dn_bounds(&map(2, 0, 0, 2), 3).unwrap(), (r(8, 1), r(9, 1)));
    assert_eq!(dn_bounds(&map(2, 0, 0, 3), 2).unwrap(), (r(4, 1), r(5, 1)));
    assert_eq!(dn_bounds(&map(1, -2, 1, 1), 1).unwrap(), (r(1, 1), r(2, 1)));
}

#[test]
fn sandwich_and_universal_bound() {
    for m in test_maps() {
        for n in 0..=8 {
            let dn = dn_planar(&m, n, &budget()).unwrap();
            let (lo, hi) = dn_bounds(&m, n).unwrap();
            let d = Rational::from_integer(int(dn as i64));
            assert!(lo.ceil() <= d && d <= hi.floor(), "{} n = {n}: {dn} not in [{lo}, {hi}]", m.matrix());
            let dm1 = int(dn as i64 - 1);
            assert!(&dm1 * &dm1 <= m.degree_pow(n));
        }
    }
}

#[test]
fn lambda0_examples() {
    let r = lambda0_estimate(&map(2, 0, 0, 2), 8, &budget()).unwrap();
    assert!(r.terms.iter().all(|t| t.dn == 1 << t.n && (t.root_f64 - 2.0).abs() < 1e-12));
    let r = lambda0_estimate(&map(2, 0, 0, 3), 5, &budget()).unwrap();
    assert!(r.terms.iter().all(|t| (t.root_f64 - 2.0).abs() < 1e-12));
    assert!(r.within(1e-12));

    let r = lambda0_estimate(&map(1, -2, 1, 1), 8, &budget()).unwrap();
    assert!((r.target.approx() - 3f64.sqrt()).abs() < 1e-12);
    assert!(r.within(0.15), "error {}", r.final_error_f64);
    for t in &r.terms {
        assert!(t.lower_root_f64 <= t.root_f64 + 1e-12 && t.root_f64 <= t.upper_root_f64 + 1e-12);
    }
}

#[test]
fn lambda0_rejects_zero_levels() {
    assert!(matches!(lambda0_estimate(&map(2, 0, 0, 2), 0, &budget()), Err(Error::InvalidInput(_))));
}

#[test]
fn tiny_budget_is_reported() {
    let err = dn_planar(&map(2, 0, 0, 2), 8, &Budget::uniform(50)).unwrap_err();
    assert!(err.is_budget());
}

#[test]
fn nesting_follows_the_matrix_shape() {
    for n in 0..=4 {
        assert!(tiles_nest(&map(2, 0, 0, 2).level(n).unwrap()));
        assert!(tiles_nest(&map(2, 0, 0, 3).level(n).unwrap()));
        assert!(tiles_nest(&map(0, -2, 1, 0).level(n).unwrap()));
    }
    for n in 1..=4 {
        assert!(!tiles_nest(&map(1, -2, 1, 1).level(n).unwrap()));
        assert!(!tiles_nest(&map(2, 1, 0, 2).level(n).unwrap()));
    }
    let geo = map(2, 0, 0, 3).level(2).unwrap();
    assert_eq!(zero_tile_region(&geo).len(), 36);
}

#[test]
fn menger_examples() {
    let r = menger_verify(&map(2, 0, 0, 2), 1, &budget()).unwrap();
    assert_eq!((r.dn, r.path_min_tiles, r.max_disjoint_paths), (2, 2, 2));
    assert!(r.single_tile_bound_holds);
    let r = menger_verify(&map(2, 0, 0, 2), 2, &budget()).unwrap();
    assert_eq!((r.dn, r.path_min_tiles, r.max_disjoint_paths, r.tile_budget), (4, 4, 4, 16));
    assert!(r.single_tile_bound_holds);
    let r = menger_verify(&map(2, 0, 0, 3), 1, &budget()).unwrap();
    assert_eq!(r.dn, 2);
    assert!(r.max_disjoint_paths * r.path_min_tiles <= 6);
}

#[test]
fn menger_chain_on_test_maps() {
    for m in test_maps() {
        for n in 1..=4 {
            let r = menger_verify(&m, n, &budget()).unwrap();
            let geo = m.level(n).unwrap();
            assert_eq!(r.nested, tiles_nest(&geo));
            if r.nested {
                assert_eq!(r.region_tiles, r.tile_budget);
                assert!(r.chain_holds);
                assert!(r.dn * r.dn <= r.tile_budget);
            } else {
                assert!(r.region_tiles > r.tile_budget);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn planar_and_folded_agree_on_random_maps(
        a in -4i64..=4, b in -4i64..=4, c in -4i64..=4, d in -4i64..=4, n in 1u32..=3,
    ) {
        let Ok(m) = make_map(IntMat2::from_i64([a, b, c, d])) else { return Ok(()); };
        prop_assume!(m.degree_pow(n) <= int(400));
        let p = dn_planar(&m, n, &budget()).unwrap();
        let f = dn_folded(&m, n, &budget()).unwrap();
        prop_assert_eq!(p, f);
        let (lo, hi) = dn_bounds(&m, n).unwrap();
        let dr = Rational::from_integer(int(p as i64));
        prop_assert!(lo <= dr && dr <= hi);
        prop_assert!(!lo.is_negative() && !lo.is_zero());
    }
}

#[test]
fn matrix_helper_is_consistent() {
    assert_eq!(map(2, 1, 0, 2).matrix(), &IntMat2::from_i64([2, 1, 0, 2]));
}

