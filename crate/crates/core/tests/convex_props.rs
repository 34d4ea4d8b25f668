mod common;

use common::strategy::{int_instance, real_instance};
use proptest::prelude::*;
use weightlat::convex::{
    chain_valley_check, convex_defect, convex_iterate, convex_repair, convex_step, literal_limit,
    unconstrained_elements,
};
use weightlat::oracle::{brute_convex_step, brute_defect, OracleBudget};
use weightlat::{ConvexMode, Property};

const MODES: [ConvexMode; 2] = [ConvexMode::PaperLiteral, ConvexMode::StrictChain];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matches_brute_force((_g, f, w) in int_instance(4, 9)) {
        let b = OracleBudget::default();
        for mode in MODES {
            let fast = convex_defect(&f, &w, mode).unwrap();
            prop_assert_eq!(fast, brute_defect(&f, &w, Property::Convex, mode, b).unwrap());
            prop_assert_eq!(convex_step(&f, &w, mode).unwrap(), brute_convex_step(&f, &w, mode, b).unwrap());
        }
    }

    #[test]
    fn literal_defect_dominates_strict((_g, f, w) in real_instance(5, 10.0)) {
        let lit = convex_defect(&f, &w, ConvexMode::PaperLiteral).unwrap().epsilon_star;
        let strict = convex_defect(&f, &w, ConvexMode::StrictChain).unwrap().epsilon_star;
        prop_assert!(lit >= strict);
    }

    #[test]
    fn steps_never_increase((_g, f, w) in real_instance(5, 10.0)) {
        for mode in MODES {
            let s = convex_step(&f, &w, mode).unwrap();
            for h in f.ids() {
                prop_assert!(s[h] <= w[h]);
            }
        }
    }

    #[test]
    fn literal_iteration_reaches_the_minimum((_g, f, w) in real_instance(5, 10.0)) {
        let limit = literal_limit(&f, &w).unwrap();
        prop_assert_eq!(limit, w.min_value());
        let (out, trace) = convex_iterate(&f, &w, ConvexMode::PaperLiteral, 1e-10, 10_000).unwrap();
        prop_assert!(trace.converged);
        prop_assert!(out.values().iter().all(|v| (v - limit).abs() <= 1e-8));
    }

    #[test]
    fn strict_iteration_is_convex_and_valley_shaped((_g, f, w) in real_instance(5, 10.0)) {
        let (out, trace) = convex_iterate(&f, &w, ConvexMode::StrictChain, 1e-10, 10_000).unwrap();
        prop_assert!(trace.converged);
        prop_assert!(convex_defect(&f, &out, ConvexMode::StrictChain).unwrap().epsilon_star <= 1e-8);
        prop_assert_eq!(chain_valley_check(&f, &out, 1e-8).unwrap(), None);
        for h in f.ids() {
            prop_assert!(out[h] <= w[h]);
        }
    }

    #[test]
    fn repair_bounds((_g, f, w) in real_instance(5, 10.0), eps in 0.0..3.0f64) {
        for mode in MODES {
            let r = convex_repair(&f, &w, eps, mode, 1e-10, 10_000).unwrap();
            let (_, second) = &r.auxiliary[1];
            for h in f.ids() {
                prop_assert!(r.repaired[h] <= w[h] + eps / 2.0 + 1e-9);
                prop_assert!(r.repaired[h] >= w.min_value() - eps / 2.0 - 1e-9);
                prop_assert!(r.repaired[h] <= second[h]);
            }
            prop_assert!(r.checks.iter().all(|c| c.holds), "{:?}", r.checks);
        }
    }
}

#[test]
fn unconstrained_elements_keep_their_values() {
    let mut rng = common::rng(21);
    for _ in 0..30 {
        let (_, f) = common::random_family(&mut rng, 5);
        let w = common::int_weights(&mut rng, &f, 9);
        let s = convex_step(&f, &w, ConvexMode::StrictChain).unwrap();
        let below = f.down_min(w.values(), true);
        let above = f.up_min(w.values(), true);
        let mut free = 0;
        for h in f.ids() {
            if below[h].is_none() || above[h].is_none() {
                assert_eq!(s[h], w[h]);
                free += 1;
            }
        }
        assert_eq!(free, unconstrained_elements(&f, ConvexMode::StrictChain));
    }
}

#[test]
fn explicit_posets_match_brute_force() {
    let mut rng = common::rng(8);
    let b = OracleBudget::default();
    for round in 0..60 {
        let m = 2 + common::below(&mut rng, 7) as usize;
        let f = common::random_poset(&mut rng, m, 0.4, round % 3 != 0);
        let w = common::int_weights(&mut rng, &f, 9);
        for mode in MODES {
            assert_eq!(
                convex_defect(&f, &w, mode).unwrap(),
                brute_defect(&f, &w, Property::Convex, mode, b).unwrap(),
                "round {round}"
            );
            assert_eq!(
                convex_step(&f, &w, mode).unwrap(),
                brute_convex_step(&f, &w, mode, b).unwrap()
            );
        }
        if f.top().is_some() {
            assert_eq!(literal_limit(&f, &w).unwrap(), w.min_value());
        }
    }
}
