use mathieu_core::admissible::{mathieu_bound, reduce_su2, zero_in_hull};
use mathieu_core::harness::{
    generate_family, parse_value, search_nonzero_moment, verify_vanishing, Input, RandomFamilySpec, SearchOutcome,
};
use mathieu_core::oracle::{caratheodory_zero_in_hull, expansion_power_moment, reachable_sums};
use mathieu_core::quadrature::{numeric_moment_admissible, su2_euler_moment, QuadratureSpec};
use mathieu_core::{Admissible, SU2Function};
use num_traits::Zero;
use proptest::prelude::*;

fn admissible(k: usize, l: usize, max_terms: usize, bound: u32) -> impl Strategy<Value = Admissible> {
    any::<u64>().prop_map(move |seed| {
        match generate_family(&RandomFamilySpec::admissible(k, l, max_terms, bound, 5, seed)) {
            Ok(Input::Admissible(h)) => h,
            other => panic!("unexpected {other:?}"),
        }
    })
}

fn su2(max_terms: usize, bound: u32) -> impl Strategy<Value = SU2Function> {
    any::<u64>().prop_map(move |seed| match generate_family(&RandomFamilySpec::su2(max_terms, bound, 5, seed)) {
        Ok(Input::Su2(f)) => f,
        other => panic!("unexpected {other:?}"),
    })
}

fn point_set() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(-4i64..=4, k), 1..=12))
}

proptest! {
    #[test]
    fn hull_matches_caratheodory(points in point_set()) {
        prop_assert_eq!(zero_in_hull(&points).unwrap(), caratheodory_zero_in_hull(&points));
    }

    #[test]
    fn separators_are_valid(points in point_set()) {
        let hull = mathieu_core::admissible::analyze_hull(&points).unwrap();
        for s in &hull.separators {
            prop_assert!(s.offset > 0);
            for p in &points {
                let v: i64 = s.normal.iter().zip(p).map(|(a, b)| a * b).sum();
                prop_assert!(v >= s.offset);
            }
        }
        prop_assert_eq!(hull.separators.is_empty(), hull.contains_zero);
    }

    #[test]
    fn moments_match_expansion(h in admissible(2, 1, 4, 2), p in 0u32..=5) {
        prop_assert_eq!(h.power_moment(p), expansion_power_moment(&h, p));
    }

    #[test]
    fn powers_by_squaring_match(h in admissible(2, 2, 4, 2), p in 0u32..=5) {
        prop_assert_eq!(h.ad_power(p), h.ad_power_by_squaring(p));
    }

    #[test]
    fn documents_round_trip(h in admissible(3, 2, 6, 3)) {
        let doc = Input::Admissible(h.clone()).to_json();
        prop_assert_eq!(parse_value(&doc).unwrap(), Input::Admissible(h));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn outside_hull_moments_vanish(h in admissible(2, 1, 5, 2)) {
        prop_assume!(!h.spectrum().contains_zero);
        for (p, v) in h.power_moment_iter(12) {
            if p > 0 {
                prop_assert!(v.is_zero(), "P = {}", p);
            }
        }
    }

    #[test]
    fn su2_outside_hull_moments_vanish(f in su2(3, 2)) {
        let weights: Vec<Vec<i64>> = f.weight_spectrum().into_iter().map(|w| w.to_vec()).collect();
        prop_assume!(!weights.is_empty() && !zero_in_hull(&weights).unwrap());
        let mut power = SU2Function::one();
        for p in 1..=12 {
            power = power.normal_multiply(&f);
            prop_assert!(power.haar_functional().is_zero(), "P = {}", p);
        }
    }

    #[test]
    fn search_never_contradicts_vanishing(h in admissible(2, 1, 5, 2)) {
        if verify_vanishing(&h, 8).is_ok() {
            let r = search_nonzero_moment(&h, 8, 0).unwrap();
            let exhausted = matches!(r.outcome, SearchOutcome::Exhausted { .. });
            prop_assert!(exhausted);
        }
    }

    #[test]
    fn mathieu_bound_is_sound(h in admissible(2, 1, 4, 2), g in admissible(2, 1, 3, 3)) {
        let Some(p0) = mathieu_bound(&h, &g).unwrap() else { return Ok(()) };
        let first = (p0.floor() + 1u32).try_into().unwrap();
        let sp_h: Vec<Vec<i64>> = h.terms().keys().cloned().collect();
        for (p, v) in h.weighted_power_moments(&g, first, first + 9).unwrap() {
            prop_assert!(v.is_zero(), "P = {}", p);
            // no exponent combination can cancel against Sp(g) either
            let sums = reachable_sums(&sp_h, p);
            for m in g.terms().keys() {
                let neg: Vec<i64> = m.iter().map(|v| -v).collect();
                prop_assert!(!sums.contains(&neg));
            }
        }
    }

    #[test]
    fn reduction_preserves_moments(f in su2(4, 2), p in 1u32..=5) {
        prop_assert_eq!(reduce_su2(&f).power_moment(p), f.power_moment_direct(p));
    }

    #[test]
    fn euler_quadrature_matches(f in su2(3, 2), p in 1u32..=3) {
        let exact = f.power_moment_direct(p).to_complex();
        let numeric = su2_euler_moment(&f, p, &QuadratureSpec::default()).unwrap();
        prop_assert!((numeric - exact).norm() <= 1e-8 * exact.norm().max(1.0));
    }

    #[test]
    fn torus_cube_quadrature_matches(h in admissible(2, 2, 4, 2), p in 1u32..=4) {
        let exact = h.power_moment(p).to_complex();
        let numeric = numeric_moment_admissible(&h, p, &QuadratureSpec::default()).unwrap();
        prop_assert!((numeric - exact).norm() <= 1e-10 * exact.norm().max(1.0));
    }
}
