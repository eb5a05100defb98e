use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use nnet_core::io::{nj_newick, read_phylip, trace_to_json_lines, write_nexus, LabeledMatrix};
use nnet_core::kalmanson::{
    find_kalmanson_ordering, find_kalmanson_ordering_exhaustive, first_four_point_violation, first_kalmanson_violation,
    Violation,
};
use nnet_core::length::{balanced_length, count_consistent_orderings, split_system_eta};
use nnet_core::tsp::read_tsplib_euc2d;
use nnet_core::weights::{
    clamp_nonnegative, eta_weights, lambda_formula, nnls_fit, weighted_least_squares, DesignMatrix,
};
use nnet_core::{
    brute_force_tsp, count_associahedron_vertices, count_distinct_orderings, count_nnet_outputs,
    is_pairwise_compatible, neighbor_joining, run_neighbor_net_with, CircularOrdering, DissimilarityMap,
    NeighborNetOptions, PartialCircularOrdering, Rational, Scalar, Split, WeightedSplitSystem,
};

use crate::{
    Arithmetic, CheckArgs, EnumerateArgs, EstimateArgs, InvariantFailure, LengthArgs, Method, NjArgs, NnetArgs,
    OlsWeights, TspArgs,
};

/// Six significant digits, for human-readable reports.
fn fmt6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = (5 - v.abs().log10().floor() as i32).max(0) as usize;
    let text = format!("{v:.digits$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

fn show<T: Scalar>(v: &T, arithmetic: Arithmetic) -> String {
    match arithmetic {
        Arithmetic::Float => fmt6(v.to_f64()),
        Arithmetic::Rational => v.to_string(),
    }
}

fn load_phylip(path: &Path) -> anyhow::Result<LabeledMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_phylip(&text).with_context(|| format!("parsing {}", path.display()))
}

fn exact(d: &DissimilarityMap) -> DissimilarityMap<Rational> {
    d.map(|v| Rational::from_f64(*v))
}

fn taxon_index(labels: &[String], name: &str) -> anyhow::Result<usize> {
    labels
        .iter()
        .position(|l| l == name)
        .with_context(|| format!("unknown taxon {name:?}"))
}

fn parse_taxa(labels: &[String], text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|name| taxon_index(labels, name))
        .collect()
}

fn parse_ordering(labels: &[String], text: &str) -> anyhow::Result<CircularOrdering> {
    Ok(CircularOrdering::new(parse_taxa(labels, text)?)?)
}

fn label_list(labels: &[String], taxa: impl IntoIterator<Item = usize>) -> String {
    taxa.into_iter()
        .map(|t| labels[t].as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn split_label(labels: &[String], split: &Split) -> String {
    format!(
        "{} | {}",
        label_list(labels, split.block_with_zero().iter()),
        label_list(labels, split.other_block().iter())
    )
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn neighbor_net_ordering<T: Scalar>(
    d: &DissimilarityMap<T>,
    options: &NeighborNetOptions,
) -> anyhow::Result<CircularOrdering> {
    Ok(run_neighbor_net_with(d, options)?.ordering)
}

pub fn nnet(args: &NnetArgs) -> anyhow::Result<()> {
    let input = load_phylip(&args.input)?;
    let options = NeighborNetOptions::new(args.scheme.scheme()?).with_endpoint_rule(args.scheme.endpoint_rule());
    let (ordering, tree_splits, trace) = match args.arithmetic {
        Arithmetic::Float => {
            let result = run_neighbor_net_with(&input.matrix, &options)?;
            (result.ordering, result.tree_splits, trace_to_json_lines(&result.trace))
        }
        Arithmetic::Rational => {
            let result = run_neighbor_net_with(&exact(&input.matrix), &options)?;
            (result.ordering, result.tree_splits, trace_to_json_lines(&result.trace))
        }
    };
    if !is_pairwise_compatible(&tree_splits) || !ordering.is_circular_system(&tree_splits) {
        return Err(InvariantFailure("tree splits are not compatible and circular".to_string()).into());
    }

    let labels = &input.labels;
    println!("ordering: {}", label_list(labels, ordering.as_slice().iter().copied()));
    println!("tree splits: {}", tree_splits.len());
    for split in &tree_splits {
        println!("  {}", split_label(labels, split));
    }
    if let Some(path) = &args.trace {
        write_file(path, &trace)?;
    }
    if let Some(path) = &args.nexus {
        if input.matrix.n() < 4 {
            bail!("Nexus output needs at least 4 taxa to estimate split weights");
        }
        let fit = nnls_fit(&input.matrix, &ordering, None)?;
        write_file(
            path,
            &write_nexus(labels, Some(&ordering), &fit.system.without_zero_weights()),
        )?;
    }
    Ok(())
}

pub fn nj(args: &NjArgs) -> anyhow::Result<()> {
    let input = load_phylip(&args.input)?;
    let tree = neighbor_joining(&input.matrix, args.alpha)?;
    println!("{}", nj_newick(&tree, &input.labels)?);
    Ok(())
}

pub fn tsp(args: &TspArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let (labels, d) = if text.contains("NODE_COORD_SECTION") {
        let instance =
            read_tsplib_euc2d(&text, args.round.into()).with_context(|| format!("parsing {}", args.input.display()))?;
        let labels = (1..=instance.coords.len()).map(|k| k.to_string()).collect();
        (labels, instance.dissimilarity)
    } else {
        let input = read_phylip(&text).with_context(|| format!("parsing {}", args.input.display()))?;
        (input.labels, input.matrix)
    };
    let options = NeighborNetOptions::new(args.scheme.scheme()?).with_endpoint_rule(args.scheme.endpoint_rule());
    let ordering = neighbor_net_ordering(&d, &options)?;
    let length = nnet_core::tour_length(&d, &ordering);
    println!("tour: {}", label_list(&labels, ordering.as_slice().iter().copied()));
    println!("length: {}", fmt6(length));
    if args.exact {
        let best = brute_force_tsp(&d)?;
        println!(
            "optimal tour: {}",
            label_list(&labels, best.ordering.as_slice().iter().copied())
        );
        println!("optimal length: {}", fmt6(best.length));
    }
    Ok(())
}

fn describe_violation(labels: &[String], v: &Violation<f64>) -> String {
    let sums: Vec<String> = v.sums.iter().map(|s| fmt6(*s)).collect();
    format!("{} (pair sums {})", label_list(labels, v.taxa), sums.join(", "))
}

pub fn check(args: &CheckArgs) -> anyhow::Result<()> {
    if args.tol < 0.0 {
        bail!("tolerance must be nonnegative");
    }
    let input = load_phylip(&args.input)?;
    let (d, labels) = (&input.matrix, &input.labels);
    match first_four_point_violation(d, &args.tol) {
        None => println!("four-point: holds"),
        Some(v) => println!("four-point: fails at {}", describe_violation(labels, &v)),
    }
    if d.n() < 4 {
        println!("kalmanson: holds for every ordering of fewer than 4 taxa");
        return Ok(());
    }
    if let Some(text) = &args.ordering {
        let ordering = parse_ordering(labels, text)?;
        match first_kalmanson_violation(d, &ordering, &args.tol)? {
            None => println!("kalmanson: holds for the given ordering"),
            Some(v) => println!(
                "kalmanson: fails for the given ordering at {}",
                describe_violation(labels, &v)
            ),
        }
        return Ok(());
    }
    if let Some(ordering) = find_kalmanson_ordering(d, &args.tol)? {
        println!(
            "kalmanson: holds for the neighbor-net ordering {}",
            label_list(labels, ordering.as_slice().iter().copied())
        );
    } else if d.n() <= args.exhaustive_limit {
        match find_kalmanson_ordering_exhaustive(d, &args.tol)? {
            Some(ordering) => println!(
                "kalmanson: holds for {} (exhaustive search; the neighbor-net ordering fails)",
                label_list(labels, ordering.as_slice().iter().copied())
            ),
            None => println!("kalmanson: fails for every ordering"),
        }
    } else {
        println!(
            "kalmanson: fails for the neighbor-net ordering; exhaustive search skipped above {} taxa",
            args.exhaustive_limit
        );
    }
    Ok(())
}

struct Estimate<T> {
    weights: Vec<(Split, T)>,
    residual: T,
    /// Balanced length and total weight, for the adjacency-weighted fit.
    identity: Option<(T, T)>,
}

fn estimate_with<T: Scalar>(
    d: &DissimilarityMap<T>,
    ordering: &CircularOrdering,
    args: &EstimateArgs,
) -> anyhow::Result<Estimate<T>> {
    if args.ols_weights == OlsWeights::Eta && args.method != Method::Nnls {
        bail!("--ols-weights applies only to --method nnls");
    }
    let n = d.n();
    let residual_of = |weights: &[(Split, T)]| -> anyhow::Result<T> {
        let design = DesignMatrix::new(n, weights.iter().map(|(s, _)| s.clone()).collect())?;
        let lambda: Vec<T> = weights.iter().map(|(_, w)| w.clone()).collect();
        Ok(design.residual(d, &lambda, None))
    };
    let weights = match args.method {
        Method::Formula => lambda_formula(d, ordering)?,
        Method::FormulaClamped => clamp_nonnegative(&lambda_formula(d, ordering)?)?.entries().to_vec(),
        Method::Nnls => {
            let fit = nnls_fit(d, ordering, None)?;
            if args.ols_weights == OlsWeights::Uniform {
                fit.system.entries().to_vec()
            } else {
                let mut support: Vec<Split> = fit
                    .system
                    .entries()
                    .iter()
                    .filter(|(s, w)| s.is_trivial() || *w > T::zero())
                    .map(|(s, _)| s.clone())
                    .collect();
                support.sort();
                let eta = split_system_eta(n, &support, args.cap)?;
                let lengths = eta.balanced_length(d)?;
                let weights = weighted_least_squares(d, support, &eta_weights(&eta)?)?;
                let total = nnet_core::scalar::sum(weights.iter().map(|(_, w)| w.clone()));
                let residual = residual_of(&weights)?;
                return Ok(Estimate {
                    weights,
                    residual,
                    identity: Some((lengths, total)),
                });
            }
        }
    };
    let residual = residual_of(&weights)?;
    Ok(Estimate {
        weights,
        residual,
        identity: None,
    })
}

fn report_estimate<T: Scalar>(
    labels: &[String],
    ordering: &CircularOrdering,
    estimate: &Estimate<T>,
    args: &EstimateArgs,
) -> anyhow::Result<()> {
    println!("ordering: {}", label_list(labels, ordering.as_slice().iter().copied()));
    for (split, w) in &estimate.weights {
        println!("{}\t{}", show(w, args.arithmetic), split_label(labels, split));
    }
    println!("residual: {}", show(&estimate.residual, args.arithmetic));
    if let Some((length, total)) = &estimate.identity {
        println!("balanced length: {}", show(length, args.arithmetic));
        println!("total weight: {}", show(total, args.arithmetic));
    }
    if let Some(path) = &args.nexus {
        let entries: Vec<(Split, f64)> = estimate
            .weights
            .iter()
            .filter(|(_, w)| *w != T::zero())
            .map(|(s, w)| (s.clone(), w.to_f64()))
            .collect();
        let system = WeightedSplitSystem::new(ordering.n(), entries)
            .context("Nexus output needs nonnegative weights; use formula-clamped or nnls")?;
        write_file(path, &write_nexus(labels, Some(ordering), &system))?;
    }
    Ok(())
}

pub fn estimate(args: &EstimateArgs) -> anyhow::Result<()> {
    let input = load_phylip(&args.input)?;
    let ordering = match &args.ordering {
        Some(text) => parse_ordering(&input.labels, text)?,
        None => neighbor_net_ordering(
            &input.matrix,
            &NeighborNetOptions::new(nnet_core::WeightingScheme::BalancedTsp),
        )?,
    };
    match args.arithmetic {
        Arithmetic::Float => {
            let estimate = estimate_with(&input.matrix, &ordering, args)?;
            report_estimate(&input.labels, &ordering, &estimate, args)
        }
        Arithmetic::Rational => {
            let estimate = estimate_with(&exact(&input.matrix), &ordering, args)?;
            report_estimate(&input.labels, &ordering, &estimate, args)
        }
    }
}

fn parse_blocks(labels: &[String], text: Option<&str>) -> anyhow::Result<PartialCircularOrdering> {
    let n = labels.len();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    if let Some(text) = text {
        for part in text.split('|') {
            let path = parse_taxa(labels, part)?;
            if path.is_empty() {
                bail!("empty block in {text:?}");
            }
            blocks.push(path);
        }
    }
    let listed: Vec<usize> = blocks.iter().flatten().copied().collect();
    blocks.extend((0..n).filter(|t| !listed.contains(t)).map(|t| vec![t]));
    Ok(PartialCircularOrdering::new(n, blocks)?)
}

pub fn length(args: &LengthArgs) -> anyhow::Result<()> {
    if args.cap == 0 {
        bail!("cap must be at least 1");
    }
    let input = load_phylip(&args.input)?;
    let pco = parse_blocks(&input.labels, args.blocks.as_deref())?;
    println!("consistent orderings: {}", count_consistent_orderings(&pco));
    let length = match args.arithmetic {
        Arithmetic::Float => fmt6(balanced_length(&input.matrix, &pco, args.cap)?),
        Arithmetic::Rational => balanced_length(&exact(&input.matrix), &pco, args.cap)?.to_string(),
    };
    println!("balanced length: {length}");
    Ok(())
}

pub fn enumerate(args: &EnumerateArgs) -> anyhow::Result<()> {
    if args.n < 3 {
        bail!("--n must be at least 3");
    }
    println!("n\toutputs\tassociahedron vertices\tcircular orderings");
    for n in 3..=args.n {
        println!(
            "{n}\t{}\t{}\t{}",
            count_nnet_outputs(n)?,
            count_associahedron_vertices(n)?,
            count_distinct_orderings(n)?
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits_without_padding() {
        assert_eq!(fmt6(741.8461234), "741.846");
        assert_eq!(fmt6(758.0), "758");
        assert_eq!(fmt6(0.999_999_999), "1");
        assert_eq!(fmt6(0.000_123_456_78), "0.000123457");
        assert_eq!(fmt6(1234567.8), "1234568");
        assert_eq!(fmt6(0.0), "0");
    }

    #[test]
    fn blocks_default_to_singletons() {
        let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let pco = parse_blocks(&labels, Some("b,a | d")).unwrap();
        assert_eq!(pco.len(), 3);
        assert!(parse_blocks(&labels, Some("a||b")).is_err());
        assert!(parse_blocks(&labels, Some("a,x")).is_err());
    }
}
