use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pseudoshift::criteria::{
    check_dcriterion_condition, check_dhc_condition_b, check_hereditary_powers,
    check_scriterion_condition, check_shc_condition_b, check_weighted_s_ratio, replay,
    structural_dcriterion_blocker, NkSchedule, PointKind, Summary,
};
use pseudoshift::{power_as_pseudoshift, sample, PseudoShift, ScalarFamily, SearchParams, ShiftMap, Verdict};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn same_outcome(a: &Verdict, b: &Verdict) -> bool {
    a.is_verified() == b.is_verified() && a.is_refuted() == b.is_refuted() && a.witness_k() == b.witness_k()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn s_ratio_specializes_the_s_criterion(seed in any::<u64>()) {
        let mut g = rng(seed);
        let ops = g.gen_range(2..=3);
        let ts: Vec<PseudoShift<f64>> = (0..ops).map(|_| sample::weighted_shift(&mut g, 24)).collect();
        let eps = g.gen_range(0.05..2.0);
        let params = SearchParams::new(eps, 1, 12, g.gen_range(1..=4), NkSchedule::Identity);
        let a = check_weighted_s_ratio(&ts, &params, 1).unwrap();
        let b = check_scriterion_condition(&ts, &params).unwrap();
        prop_assert!(same_outcome(&a.verdict, &b.verdict), "{:?} vs {:?}", a.verdict, b.verdict);
    }

    #[test]
    fn s_criterion_agrees_with_shc_on_unit_rows_for_shifts(seed in any::<u64>()) {
        let mut g = rng(seed);
        let ts: Vec<PseudoShift<f64>> = (0..2).map(|_| sample::weighted_shift(&mut g, 24)).collect();
        let m = g.gen_range(1..=4);
        let params = SearchParams::new(g.gen_range(0.05..2.0), 1, 10, m, NkSchedule::Identity);
        let row = ScalarFamily::Row(vec![1.0; m as usize]);
        let a = check_shc_condition_b(&ts, &row, &params).unwrap();
        let b = check_scriterion_condition(&ts, &params).unwrap();
        prop_assert!(same_outcome(&a.verdict, &b.verdict));
    }

    #[test]
    fn verification_survives_larger_epsilon(seed in any::<u64>(), widen in 1.0f64..10.0) {
        let mut g = rng(seed);
        let ts: Vec<PseudoShift<f64>> = (0..2).map(|_| sample::operator(&mut g, 32)).collect();
        let m = g.gen_range(1..=3);
        let eps = g.gen_range(0.1..50.0);
        let params = SearchParams::new(eps, 1, 8, m, NkSchedule::Identity);
        let fam = ScalarFamily::Matrix((0..2).map(|_| (0..m).map(|_| sample::rational(&mut g)).collect()).collect());
        for cert in [
            check_dhc_condition_b(&ts, &fam, &params).unwrap(),
            check_dcriterion_condition(&ts, &params).unwrap(),
            check_scriterion_condition(&ts, &params).unwrap(),
        ] {
            if cert.verdict.is_verified() {
                prop_assert!(replay(&ts, Some(&fam), &cert, None).unwrap());
                prop_assert!(replay(&ts, Some(&fam), &cert, Some(eps * widen)).unwrap());
            }
        }
    }

    #[test]
    fn shared_maps_always_block_the_d_criterion(seed in any::<u64>()) {
        let mut g = rng(seed);
        let f = sample::shift_map(&mut g);
        let ts: Vec<PseudoShift<f64>> = (0..2)
            .map(|_| PseudoShift::new(f.clone(), sample::weight_rule(&mut g, 32)).unwrap())
            .collect();
        prop_assert_eq!(structural_dcriterion_blocker(&ts, 64), Some((1, 2)));
        let params = SearchParams::new(g.gen_range(0.01..100.0), 1, 6, g.gen_range(1..=4), NkSchedule::Identity);
        let cert = check_dcriterion_condition(&ts, &params).unwrap();
        let Verdict::Refuted { blockers } = cert.verdict else {
            return Err(TestCaseError::fail("expected a refutation"));
        };
        prop_assert!(blockers.iter().all(|b| b.kind == PointKind::ImageOverlap));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn hereditary_profile_matches_converted_criterion(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r1 = g.gen_range(1..=2u64);
        let r2 = g.gen_range(r1 + 1..=3);
        let ws: Vec<_> = (0..2).map(|_| sample::weight_rule(&mut g, 40)).collect();
        let m = g.gen_range(1..=3);
        let eps = g.gen_range(0.05..2.0);
        let params = SearchParams::new(eps, 1, 8, m, NkSchedule::Identity);
        let cert = check_hereditary_powers(&ws, &[r1, r2], &params).unwrap();
        let Some(Summary::Hereditary { profile }) = cert.summary else {
            return Err(TestCaseError::fail("missing profile"));
        };
        let converted = vec![
            power_as_pseudoshift(&ws[0], r1).unwrap(),
            power_as_pseudoshift(&ws[1], r2).unwrap(),
        ];
        for row in &profile {
            let single = SearchParams::new(eps, row.k, row.k, m, NkSchedule::Identity);
            let d = check_dcriterion_condition(&converted, &single).unwrap();
            prop_assert_eq!(row.domination, d.verdict.is_verified(), "k = {}", row.k);
            let growth = converted.iter().all(|t| {
                (1..=m).all(|ell| -t.weight_product_at(ell, row.n_k).log_magnitude() < (eps - 1e-12).ln())
            });
            prop_assert_eq!(row.growth, growth, "k = {}", row.k);
        }
    }
}

#[test]
fn non_shifts_are_named() {
    let ts = vec![
        PseudoShift::rolewicz(2.0).unwrap(),
        PseudoShift::new(ShiftMap::example_a(), pseudoshift::WeightRule::constant(2.0).unwrap()).unwrap(),
    ];
    let params = SearchParams::new(0.5, 1, 3, 1, NkSchedule::Identity);
    let err = check_weighted_s_ratio(&ts, &params, 1).unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
}

#[test]
fn certificates_serialize_stably() {
    let ts = vec![PseudoShift::rolewicz(2.0).unwrap(), PseudoShift::rolewicz(3.0).unwrap()];
    let params = SearchParams::new(0.5, 1, 3, 2, NkSchedule::Explicit(vec![2, 4, 8]));
    let cert = check_dcriterion_condition(&ts, &params).unwrap();
    let a = serde_json::to_string(&cert).unwrap();
    let back: pseudoshift::CriterionCertificate = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), a);
    assert!(a.contains("\"status\":\"refuted\""));
}
