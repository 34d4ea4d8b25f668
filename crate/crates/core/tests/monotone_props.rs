mod common;

use common::strategy::{int_instance, real_instance};
use proptest::prelude::*;
use weightlat::monotone::{is_approx_monotone, monotone_defect, monotone_repair, verify_monotone};
use weightlat::oracle::{brute_defect, brute_monotone_repair, OracleBudget};
use weightlat::weights::{perturb, random_weights, sup_norm_distance};
use weightlat::{ConvexMode, Property};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn repair_at_defect_is_monotone_and_close((_g, f, w) in real_instance(8, 10.0)) {
        let d = monotone_defect(&f, &w).unwrap();
        let r = monotone_repair(&f, &w, d.epsilon_star).unwrap();
        prop_assert_eq!(verify_monotone(&f, &r.repaired).unwrap(), None);
        prop_assert!(r.distance <= d.epsilon_star / 2.0 + 1e-12);
        prop_assert!(r.guarantee_met);
    }

    #[test]
    fn perturbed_monotone_has_small_defect(
        (_g, f, w) in real_instance(7, 10.0),
        eps in 0.0..4.0f64,
        seed in any::<u64>(),
    ) {
        let base = monotone_repair(&f, &w, 0.0).unwrap().repaired;
        prop_assert_eq!(monotone_defect(&f, &base).unwrap().epsilon_star, 0.0);
        let noisy = perturb(&base, eps / 2.0, seed).unwrap();
        prop_assert!(sup_norm_distance(&base, &noisy).unwrap() <= eps / 2.0);
        prop_assert!(monotone_defect(&f, &noisy).unwrap().epsilon_star <= eps + 1e-12);
    }

    #[test]
    fn defect_is_the_threshold((_g, f, w) in int_instance(5, 9)) {
        let d = monotone_defect(&f, &w).unwrap();
        prop_assert!(is_approx_monotone(&f, &w, d.epsilon_star).unwrap());
        if d.epsilon_star > 0.0 {
            prop_assert!(!is_approx_monotone(&f, &w, d.epsilon_star - 0.5).unwrap());
        }
        prop_assert_eq!(verify_monotone(&f, &w).unwrap().is_none(), d.epsilon_star == 0.0);
    }

    #[test]
    fn repair_is_idempotent_on_monotone_input((_g, f, w) in real_instance(6, 10.0)) {
        let once = monotone_repair(&f, &w, 0.0).unwrap().repaired;
        let twice = monotone_repair(&f, &once, 0.0).unwrap().repaired;
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn matches_brute_force((_g, f, w) in int_instance(4, 9), eps in 0u8..5) {
        let b = OracleBudget::default();
        let fast = monotone_defect(&f, &w).unwrap();
        let brute = brute_defect(&f, &w, Property::Monotone, ConvexMode::StrictChain, b).unwrap();
        prop_assert_eq!(fast, brute);
        let eps = f64::from(eps);
        prop_assert_eq!(
            monotone_repair(&f, &w, eps).unwrap().repaired,
            brute_monotone_repair(&f, &w, eps, b).unwrap()
        );
    }
}

#[test]
fn explicit_posets_match_brute_force() {
    let mut rng = common::rng(11);
    for round in 0..60 {
        let m = 2 + common::below(&mut rng, 7) as usize;
        let f = common::random_poset(&mut rng, m, 0.4, round % 2 == 0);
        let w = common::int_weights(&mut rng, &f, 9);
        let brute = brute_defect(
            &f,
            &w,
            Property::Monotone,
            ConvexMode::StrictChain,
            OracleBudget::default(),
        )
        .unwrap();
        assert_eq!(monotone_defect(&f, &w).unwrap(), brute, "round {round}");
        let r = monotone_repair(&f, &w, brute.epsilon_star).unwrap();
        assert_eq!(verify_monotone(&f, &r.repaired).unwrap(), None);
        assert!(r.guarantee_met);
    }
}

#[test]
fn edge_subset_repair() {
    let g = weightlat::Graph::complete(4);
    let f = weightlat::build_family(&g, weightlat::FamilyKind::EdgeSubsets, Default::default())
        .unwrap();
    let w = random_weights(&f, 3, 0.0, 5.0).unwrap();
    let d = monotone_defect(&f, &w).unwrap();
    let r = monotone_repair(&f, &w, d.epsilon_star).unwrap();
    assert!(r.guarantee_met);
    assert!(r.distance <= d.epsilon_star / 2.0 + 1e-12);
}
