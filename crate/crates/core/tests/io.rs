use nnet_core::generate::{random_circular_system, random_euclidean, random_ordering, rng};
use nnet_core::io::{
    default_labels, nj_newick, read_nexus, read_phylip, trace_to_json_lines, write_nexus, write_phylip,
};
use nnet_core::{
    metric_from_splits, neighbor_joining, run_neighbor_net, CircularOrdering, Split, WeightedSplitSystem,
    WeightingScheme,
};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn nexus_output_matches_the_golden_file() {
    let system = WeightedSplitSystem::new(4, vec![(Split::new(4, [0, 1]).unwrap(), 1.0)]).unwrap();
    let cycle = CircularOrdering::identity(4).unwrap();
    let text = write_nexus(&default_labels(4), Some(&cycle), &system);
    assert_eq!(text, fixture("single_split.nex"));
}

#[test]
fn golden_nexus_file_reads_back() {
    let parsed = read_nexus(&fixture("single_split.nex")).unwrap();
    assert_eq!(parsed.labels, default_labels(4));
    assert_eq!(parsed.cycle, Some(CircularOrdering::identity(4).unwrap()));
    assert_eq!(parsed.system.entries(), &[(Split::new(4, [2, 3]).unwrap(), 1.0)]);
}

#[test]
fn trace_lines_are_json_objects() {
    let d = read_phylip(&fixture("original_bm_divergence.phy")).unwrap().matrix;
    let trace = run_neighbor_net(&d, WeightingScheme::BalancedTsp).unwrap().trace;
    let text = trace_to_json_lines(&trace);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), d.n() - 1);
    for (k, line) in lines.iter().enumerate() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(value["step"], k);
        assert!(value["q"].is_number());
    }
}

#[test]
fn newick_for_a_quartet() {
    let d = read_phylip("4\na 0 2 5 5\nb 2 0 5 5\nc 5 5 0 2\nd 5 5 2 0\n").unwrap();
    let tree = neighbor_joining(&d.matrix, 0.5).unwrap();
    assert_eq!(nj_newick(&tree, &d.labels).unwrap(), "((a,b),c,d);");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nexus_round_trips(seed in any::<u64>(), n in 4usize..10) {
        let mut r = rng(seed);
        let o = random_ordering(&mut r, n);
        let system = random_circular_system(&mut r, &o, 0.1, 3.0);
        let labels = default_labels(n);
        let parsed = read_nexus(&write_nexus(&labels, Some(&o), &system)).unwrap();
        prop_assert_eq!(parsed.labels, labels);
        prop_assert_eq!(parsed.cycle, Some(o));
        prop_assert_eq!(metric_from_splits(&parsed.system), metric_from_splits(&system));
    }

    #[test]
    fn phylip_round_trips_and_permuted_files_agree(seed in any::<u64>(), n in 4usize..10) {
        let mut r = rng(seed);
        let d = random_euclidean(&mut r, n);
        let labels = default_labels(n);
        let parsed = read_phylip(&write_phylip(&labels, &d)).unwrap();
        prop_assert_eq!(&parsed.labels, &labels);
        prop_assert_eq!(&parsed.matrix, &d);

        let perm = random_ordering(&mut r, n).as_slice().to_vec();
        let shuffled_labels: Vec<String> = perm.iter().map(|&t| labels[t].clone()).collect();
        let shuffled = read_phylip(&write_phylip(&shuffled_labels, &d.permuted(&perm).unwrap())).unwrap();
        let original = run_neighbor_net(&parsed.matrix, WeightingScheme::BalancedTsp).unwrap().ordering;
        let moved = run_neighbor_net(&shuffled.matrix, WeightingScheme::BalancedTsp).unwrap().ordering;
        prop_assert_eq!(moved.relabeled(&perm).unwrap(), original);
    }
}
