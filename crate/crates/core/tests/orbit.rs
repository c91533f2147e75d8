use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pseudoshift::{blowup_collapse_assemble, orbit, sample, AssemblyParams, PseudoShift, SparseVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_matches_apply_power(seed in any::<u64>(), n_max in 0u64..=10) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let t = sample::operator(&mut g, 64);
        let x = sample::sparse_vector(&mut g, 64);
        let pts = orbit(&t, &x, n_max, 8);
        prop_assert_eq!(pts.len() as u64, n_max + 1);
        for (n, pt) in pts.iter().enumerate() {
            let want = t.apply_power(n as u64, &x).project(8);
            for (a, b) in pt.iter().zip(&want) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn stages_stay_within_their_budgets(seed in any::<u64>(), lambda in 1.5f64..4.0) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let stages = g.gen_range(1..=4);
        let targets: Vec<SparseVector<f64>> = (0..stages)
            .map(|_| {
                let m = g.gen_range(1..=3);
                sample::full_target(&mut g, m)
            })
            .collect();
        let schedule: Vec<f64> = (0..stages).map(|t| 0.2 / (t as f64 + 1.0)).collect();
        let ts = vec![PseudoShift::rolewicz(lambda).unwrap()];
        let params = AssemblyParams { schedule: schedule.clone(), n_search_bound: 400, p: 2.0 };
        let (_, log) = blowup_collapse_assemble(&ts, &targets, &params).unwrap();
        prop_assert!(log.all_within_schedule());
        for (t, step) in log.steps.iter().enumerate() {
            prop_assert!(step.certified <= schedule[t] / 2.0);
            prop_assert!(step.projected[0] <= step.distances[0] + 1e-15);
            // support of the stage corrector ends at n_t + M_t
            if let Some(next) = log.steps.get(t + 1) {
                prop_assert!(next.n >= step.n + step.m_count);
            }
        }
    }
}
