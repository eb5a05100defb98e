use nnet_core::generate::{
    random_circular_system, random_dissimilarity, random_noise, random_ordering, random_sparse_circular_system,
    random_tree_system, rng,
};
use nnet_core::kalmanson::{
    circular_quartets, find_kalmanson_ordering, find_kalmanson_ordering_exhaustive, first_kalmanson_violation,
    is_kalmanson, radius_perturbation_check, satisfies_four_point, separated_quartets, strict_quartets, Noise,
};
use nnet_core::{metric_from_splits, run_neighbor_net, CircularOrdering, Split, WeightedSplitSystem, WeightingScheme};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fast_search_agrees_with_exhaustive_search(seed in any::<u64>(), n in 4usize..9) {
        let mut r = rng(seed);
        let o = random_ordering(&mut r, n);
        let sys = random_sparse_circular_system(&mut r, &o, 0.6, 0.25, 2.0);
        let d = metric_from_splits(&sys);
        let fast = find_kalmanson_ordering(&d, &0.0).unwrap();
        let exhaustive = find_kalmanson_ordering_exhaustive(&d, &0.0).unwrap();
        prop_assert!(exhaustive.is_some());
        prop_assert!(fast.as_ref().is_some_and(|f| is_kalmanson(&d, f, &0.0)));

        let noisy = random_dissimilarity(&mut r, n, 20);
        let fast = find_kalmanson_ordering(&noisy, &0.0).unwrap();
        let exhaustive = find_kalmanson_ordering_exhaustive(&noisy, &0.0).unwrap();
        if exhaustive.is_none() {
            prop_assert!(fast.is_none());
        }
        if let Some(f) = fast {
            prop_assert!(is_kalmanson(&noisy, &f, &0.0));
        }
    }

    #[test]
    fn separated_quartets_survive_agglomeration(seed in any::<u64>(), n in 4usize..11) {
        let mut r = rng(seed);
        let o = random_ordering(&mut r, n);
        let sys = random_sparse_circular_system(&mut r, &o, 0.5, 0.25, 2.0);
        let d = metric_from_splits(&sys);
        let out = run_neighbor_net(&d, WeightingScheme::BalancedTsp).unwrap().ordering;
        let compatible = circular_quartets(&out);
        let strict = strict_quartets(&d, &out, &0.0).unwrap();
        prop_assert!(strict.is_subset(&compatible));
        for q in separated_quartets(&sys) {
            prop_assert!(compatible.contains(&q));
        }
    }

    #[test]
    fn noise_within_the_radius_keeps_every_split(seed in any::<u64>(), n in 4usize..10) {
        let mut r = rng(seed);
        let o = random_ordering(&mut r, n);
        let sys = random_circular_system(&mut r, &o, 1.0, 3.0);
        let epsilon = sys.min_weight().unwrap();
        let noise = random_noise(&mut r, n, 0.49 * epsilon);
        prop_assert!(radius_perturbation_check(&sys, &noise).unwrap());
    }

    #[test]
    fn tree_metrics_are_kalmanson_for_some_ordering(seed in any::<u64>(), n in 4usize..8) {
        let sys = random_tree_system(&mut rng(seed), n, 0.5, 2.0);
        let d = metric_from_splits(&sys);
        prop_assert!(satisfies_four_point(&d, &0.0));
        prop_assert!(find_kalmanson_ordering_exhaustive(&d, &0.0).unwrap().is_some());
    }
}

fn small_circular_system(epsilon: f64) -> WeightedSplitSystem {
    let mut entries: Vec<(Split, f64)> = (0..4).map(|t| (Split::new(4, [t]).unwrap(), 1.0)).collect();
    entries.push((Split::new(4, [0, 1]).unwrap(), epsilon));
    entries.push((Split::new(4, [1, 2]).unwrap(), epsilon));
    WeightedSplitSystem::new(4, entries).unwrap()
}

#[test]
fn noise_at_twice_the_smallest_weight_can_break_a_split() {
    let epsilon = 0.25;
    let sys = small_circular_system(epsilon);
    let identity = CircularOrdering::identity(4).unwrap();
    assert!(is_kalmanson(&metric_from_splits(&sys), &identity, &0.0));
    // Lengthen the sides {0,1}, {2,3} and shorten the diagonals, so {0,2}
    // and {1,3} become cherries.
    let noise = Noise::from_fn(4, |i, j| match (i.min(j), i.max(j)) {
        (0, 1) | (2, 3) => 2.0 * epsilon,
        (0, 2) | (1, 3) => -2.0 * epsilon,
        _ => 0.0,
    });
    assert_eq!(noise.sup_norm(), 2.0 * epsilon);
    assert!(radius_perturbation_check(&sys, &noise).is_err());
    let d = noise.apply(&metric_from_splits(&sys)).unwrap();
    let out = run_neighbor_net(&d, WeightingScheme::BalancedTsp).unwrap().ordering;
    assert!(!out.is_circular_system(sys.splits()));
}

#[test]
fn violation_reports_the_offending_quartet() {
    let sys = small_circular_system(0.5);
    let d = metric_from_splits(&sys);
    let crossed = CircularOrdering::new(vec![0, 2, 1, 3]).unwrap();
    let violation = first_kalmanson_violation(&d, &crossed, &0.0).unwrap().unwrap();
    assert_eq!(violation.taxa, [0, 2, 1, 3]);
    assert!(
        first_kalmanson_violation(&d, &CircularOrdering::identity(4).unwrap(), &0.0)
            .unwrap()
            .is_none()
    );
}
