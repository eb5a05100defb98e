use nnet_core::generate::{random_dissimilarity, rng};
use nnet_core::length::{
    balanced_length, count_consistent_orderings, enumerate_consistent_orderings, eta_joined_closed_form, eta_table,
    eta_table_joined, joined_balanced_length, neighborliness_sum, z_criterion, DEFAULT_ENUMERATION_CAP,
};
use nnet_core::{
    canonical_orderings, BlockDistanceState, DissimilarityMap, PartialCircularOrdering, Rational, Scalar,
    WeightingScheme,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

const CAP: usize = DEFAULT_ENUMERATION_CAP;

fn random_pco(seed: u64, n: usize) -> PartialCircularOrdering {
    let mut r = rng(seed);
    let mut taxa: Vec<usize> = (0..n).collect();
    taxa.shuffle(&mut r);
    let mut blocks = Vec::new();
    let mut rest = taxa.as_slice();
    while !rest.is_empty() {
        let len = r.gen_range(1..=rest.len().min(3));
        blocks.push(rest[..len].to_vec());
        rest = &rest[len..];
    }
    PartialCircularOrdering::new(n, blocks).unwrap()
}

fn exact_random(seed: u64, n: usize) -> DissimilarityMap<Rational> {
    random_dissimilarity(&mut rng(seed), n, 25).map(|v| Rational::from_f64(*v))
}

/// Drives a state through random balanced TSP merges, calling `check` before each one.
fn walk_states(
    d: &DissimilarityMap<Rational>,
    seed: u64,
    mut check: impl FnMut(&BlockDistanceState<'_, Rational>) -> Result<(), TestCaseError>,
) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let mut state = BlockDistanceState::new(d);
    while state.m() > 2 {
        check(&state)?;
        let a = r.gen_range(0..state.m());
        let b = (a + r.gen_range(1..state.m())) % state.m();
        let i = *state.endpoints(a).choose(&mut r).unwrap();
        let j = *state.endpoints(b).choose(&mut r).unwrap();
        state.merge(a, b, i, j, &WeightingScheme::BalancedTsp).unwrap();
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consistent_ordering_count_matches_enumeration(seed in any::<u64>(), n in 3usize..9) {
        let pco = random_pco(seed, n);
        let listed = enumerate_consistent_orderings(&pco, CAP).unwrap();
        let filtered = canonical_orderings(n).unwrap().filter(|o| pco.is_consistent(o)).count();
        prop_assert_eq!(count_consistent_orderings(&pco), listed.len().into());
        prop_assert_eq!(listed.len(), filtered);
    }

    #[test]
    fn joined_adjacency_counts_match_closed_form(seed in any::<u64>(), n in 4usize..8) {
        let pco = random_pco(seed, n);
        prop_assume!(pco.len() >= 3);
        for r in 0..pco.len() {
            for s in (r + 1)..pco.len() {
                let brute = eta_table_joined(&pco, r, s, CAP).unwrap();
                let (count, table) = eta_joined_closed_form::<Rational>(&pco, r, s).unwrap();
                prop_assert_eq!(count, Rational::from_i64(brute.orderings() as i64));
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            prop_assert_eq!(&table[i * n + j], &Rational::from_i64(brute.get(i, j) as i64));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn balanced_length_agrees_with_adjacency_form(seed in any::<u64>(), n in 3usize..8) {
        let pco = random_pco(seed, n);
        let d = exact_random(seed ^ 0x5eed, n);
        let direct = balanced_length(&d, &pco, CAP).unwrap();
        prop_assert_eq!(direct, eta_table(&pco, CAP).unwrap().balanced_length(&d).unwrap());
    }

    #[test]
    fn joining_two_blocks_shortens_by_z(seed in any::<u64>(), n in 4usize..8) {
        let d = exact_random(seed, n);
        walk_states(&d, seed.rotate_left(7), |state| {
            let pco = state.partial_ordering();
            let whole = balanced_length(&d, &pco, CAP).unwrap();
            let m = state.m();
            for r in 0..m {
                for s in (r + 1)..m {
                    let joined = joined_balanced_length(&d, &pco, r, s, CAP).unwrap();
                    let z = z_criterion(state, r, s).unwrap();
                    prop_assert_eq!(whole.clone() - joined, z.clone());
                    let scale = Rational::from_i64(((m - 1) * (m - 2)) as i64);
                    prop_assert_eq!(neighborliness_sum(state, r, s).unwrap(), scale * z);
                }
            }
            Ok(())
        })?;
    }
}

/// The reading in which only the distances from `C_r` enter the sum.
fn z_one_sided(state: &BlockDistanceState<'_, Rational>, r: usize, s: usize) -> Rational {
    let m = state.m() as i64;
    let from_r = (0..state.m())
        .filter(|&t| t != r)
        .fold(Rational::from_i64(0), |acc, t| acc + state.block_distance(r, t).clone());
    let q = state.q_criterion(r, s).unwrap();
    -(from_r / Rational::from_i64(m - 1) + q / Rational::from_i64(2)) / Rational::from_i64(m - 2)
}

#[test]
fn one_sided_z_reading_misses_the_length_change() {
    let mut disagreements = 0;
    for seed in 0..20u64 {
        let d = exact_random(seed, 6);
        let state = BlockDistanceState::new(&d);
        let pco = state.partial_ordering();
        let whole = balanced_length(&d, &pco, CAP).unwrap();
        let joined = joined_balanced_length(&d, &pco, 0, 1, CAP).unwrap();
        if whole - joined != z_one_sided(&state, 0, 1) {
            disagreements += 1;
        }
    }
    assert!(disagreements > 0);
}

#[test]
fn singleton_blocks_count_every_ordering() {
    let pco = PartialCircularOrdering::singletons(6).unwrap();
    assert_eq!(count_consistent_orderings(&pco), 60u32.into());
    assert_eq!(enumerate_consistent_orderings(&pco, 10).map(|v| v.len()).ok(), None);
}
