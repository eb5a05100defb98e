use nnet_core::generate::{random_dissimilarity, random_ordering, random_sparse_circular_system, rng};
use nnet_core::length::DEFAULT_ENUMERATION_CAP;
use nnet_core::weights::{clamp_nonnegative, lambda_formula, nnls_fit, nnls_fit_splits, wls_length_identity_check};
use nnet_core::{metric_from_splits, DissimilarityMap, Rational, Scalar, Split, WeightedSplitSystem};
use proptest::prelude::*;
use rand::Rng;

fn exact(d: &DissimilarityMap) -> DissimilarityMap<Rational> {
    d.map(|v| Rational::from_f64(*v))
}

fn residual(d: &DissimilarityMap, sys: &WeightedSplitSystem) -> f64 {
    let fitted = metric_from_splits(sys);
    (0..d.n())
        .flat_map(|i| ((i + 1)..d.n()).map(move |j| (i, j)))
        .map(|(i, j)| (d.get(i, j) - fitted.get(i, j)).powi(2))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn formula_inverts_circular_metrics(seed in any::<u64>(), n in 4usize..11) {
        let mut r = rng(seed);
        let o = random_ordering(&mut r, n);
        let sys = random_sparse_circular_system(&mut r, &o, 0.7, 0.0, 2.0);
        let d = exact(&metric_from_splits(&sys));
        for (split, w) in lambda_formula(&d, &o).unwrap() {
            let expected = sys.weight(&split).map_or(Rational::from_i64(0), |v| Rational::from_f64(*v));
            prop_assert_eq!(w, expected);
        }
    }

    #[test]
    fn nnls_reproduces_decomposable_metrics(seed in any::<u64>(), n in 4usize..9) {
        let mut r = rng(seed);
        let o = random_ordering(&mut r, n);
        let sys = random_sparse_circular_system(&mut r, &o, 0.6, 0.25, 2.0);
        let d = exact(&metric_from_splits(&sys));
        let fit = nnls_fit(&d, &o, None).unwrap();
        prop_assert_eq!(&fit.residual, &Rational::from_i64(0));
        prop_assert_eq!(&fit.kkt_violation, &Rational::from_i64(0));
        prop_assert_eq!(metric_from_splits(&fit.system), d);
    }

    #[test]
    fn nnls_is_no_worse_than_the_clamped_formula(seed in any::<u64>(), n in 4usize..9) {
        let mut r = rng(seed);
        let d = random_dissimilarity(&mut r, n, 30);
        let o = random_ordering(&mut r, n);
        let fit = nnls_fit(&d, &o, None).unwrap();
        prop_assert!(fit.system.entries().iter().all(|(_, w)| *w >= 0.0));
        prop_assert!(fit.kkt_violation <= 1e-8);
        let clamped = clamp_nonnegative(&lambda_formula(&d, &o).unwrap()).unwrap();
        prop_assert!(fit.residual <= residual(&d, &clamped) + 1e-9);
    }

    #[test]
    fn dropping_splits_never_lowers_the_nnls_residual(seed in any::<u64>(), n in 4usize..8) {
        let mut r = rng(seed);
        let d = exact(&random_dissimilarity(&mut r, n, 30));
        let splits = random_ordering(&mut r, n).all_circular_splits();
        let subset: Vec<Split> = splits.iter().filter(|_| r.gen_bool(0.6)).cloned().collect();
        prop_assume!(!subset.is_empty());
        let full = nnls_fit_splits(&d, splits, None).unwrap();
        let partial = nnls_fit_splits(&d, subset, None).unwrap();
        prop_assert!(partial.residual >= full.residual);
    }

    #[test]
    fn eta_weighted_fit_has_the_balanced_length(seed in any::<u64>(), n in 4usize..7) {
        let mut r = rng(seed);
        let d = exact(&random_dissimilarity(&mut r, n, 30));
        let o = random_ordering(&mut r, n);
        let mut splits: Vec<Split> = o.all_circular_splits().into_iter().filter(|s| s.is_trivial() || r.gen_bool(0.5)).collect();
        splits.sort();
        let (length, total) = wls_length_identity_check(&d, &splits, DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert_eq!(length, total);
    }
}

#[test]
fn eta_weighted_fit_needs_the_trivial_splits() {
    let mut r = rng(11);
    let mut disagreements = 0;
    for _ in 0..20 {
        let d = exact(&random_dissimilarity(&mut r, 6, 30));
        let o = random_ordering(&mut r, 6);
        let nontrivial: Vec<Split> = o
            .all_circular_splits()
            .into_iter()
            .filter(|s| !s.is_trivial() && r.gen_bool(0.4))
            .collect();
        if nontrivial.is_empty() {
            continue;
        }
        let (length, total) = wls_length_identity_check(&d, &nontrivial, DEFAULT_ENUMERATION_CAP).unwrap();
        if length != total {
            disagreements += 1;
        }
    }
    assert!(disagreements > 0);
}

#[test]
fn rejects_bad_fit_requests() {
    let d = random_dissimilarity(&mut rng(1), 5, 10);
    let o = random_ordering(&mut rng(2), 6);
    assert!(nnls_fit(&d, &o, None).is_err());
    let zero_weights = DissimilarityMap::<f64>::zeros(5);
    let o5 = random_ordering(&mut rng(2), 5);
    assert!(nnls_fit(&d, &o5, Some(&zero_weights)).is_err());
    assert!(clamp_nonnegative::<f64>(&[]).is_err());
}
