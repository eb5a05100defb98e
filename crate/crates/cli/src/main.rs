mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nnet_core::length::DEFAULT_ENUMERATION_CAP;
use nnet_core::tsp::RoundMode;
use nnet_core::{EndpointRule, WeightingScheme};

/// Neighbor-net, neighbor-joining and circular split tools for distance matrices.
#[derive(Parser, Debug)]
#[command(name = "nnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run neighbor-net and print the circular ordering and tree splits.
    Nnet(NnetArgs),
    /// Run neighbor-joining and print the tree in Newick form.
    Nj(NjArgs),
    /// Read a neighbor-net ordering as a tour.
    Tsp(TspArgs),
    /// Report the four-point and Kalmanson conditions.
    Check(CheckArgs),
    /// Estimate split weights for a circular ordering.
    Estimate(EstimateArgs),
    /// Balanced length over the orderings consistent with a partial ordering.
    Length(LengthArgs),
    /// Print the counting identities for small taxon counts.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Weighting {
    BalancedTsp,
    Tree,
    Original,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Arithmetic {
    Float,
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    FormulaClamped,
    Nnls,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OlsWeights {
    Uniform,
    Eta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Endpoint {
    MinimizeLength,
    ReducedQ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Round {
    Tsplib,
    None,
}

#[derive(Args, Debug, Clone)]
struct SchemeArgs {
    /// Node weighting used when blocks merge.
    #[arg(long, value_enum, default_value_t = Weighting::BalancedTsp)]
    weighting: Weighting,
    /// Share of the weight kept by the block holding the smaller taxon
    /// under `--weighting tree`.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// How the join between the selected blocks is chosen.
    #[arg(long, value_enum, default_value_t = Endpoint::MinimizeLength)]
    endpoint_rule: Endpoint,
}

impl SchemeArgs {
    fn scheme(&self) -> anyhow::Result<WeightingScheme> {
        Ok(match self.weighting {
            Weighting::BalancedTsp => WeightingScheme::BalancedTsp,
            Weighting::Tree => WeightingScheme::tree(self.alpha)?,
            Weighting::Original => WeightingScheme::OriginalBm,
        })
    }

    fn endpoint_rule(&self) -> EndpointRule {
        match self.endpoint_rule {
            Endpoint::MinimizeLength => EndpointRule::MinimizeLength,
            Endpoint::ReducedQ => EndpointRule::ReducedQ,
        }
    }
}

#[derive(Args, Debug)]
struct NnetArgs {
    /// PHYLIP square distance matrix.
    input: PathBuf,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = Arithmetic::Float)]
    arithmetic: Arithmetic,
    /// Write one JSON record per agglomeration step to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the ordering and NNLS split weights as Nexus to this file.
    #[arg(long)]
    nexus: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NjArgs {
    /// PHYLIP square distance matrix.
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Args, Debug)]
struct TspArgs {
    /// TSPLIB `EUC_2D` file or PHYLIP matrix.
    input: PathBuf,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Rounding of TSPLIB Euclidean distances.
    #[arg(long, value_enum, default_value_t = Round::None)]
    round: Round,
    /// Also solve exactly by enumeration (small inputs only).
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// PHYLIP square distance matrix.
    input: PathBuf,
    /// Check the Kalmanson condition for this ordering (labels separated
    /// by commas or spaces) instead of searching for one.
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Largest taxon count for which the exhaustive search runs.
    #[arg(long, default_value_t = 10)]
    exhaustive_limit: usize,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// PHYLIP square distance matrix.
    input: PathBuf,
    /// Circular ordering as labels; defaults to the neighbor-net ordering.
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Nnls)]
    method: Method,
    /// Pair weights of the least squares fit. `eta` refits the support of
    /// the uniform fit, plus the trivial splits, with adjacency-count weights.
    #[arg(long, value_enum, default_value_t = OlsWeights::Uniform)]
    ols_weights: OlsWeights,
    #[arg(long, value_enum, default_value_t = Arithmetic::Float)]
    arithmetic: Arithmetic,
    /// Bound on enumerated orderings for `--ols-weights eta`.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    /// Write the weighted splits as Nexus to this file.
    #[arg(long)]
    nexus: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LengthArgs {
    /// PHYLIP square distance matrix.
    input: PathBuf,
    /// Paths separated by `|`, taxa within a path by commas, for example
    /// `a,b|c|d,e,f`. Taxa not listed become singletons.
    #[arg(long)]
    blocks: Option<String>,
    #[arg(long, value_enum, default_value_t = Arithmetic::Float)]
    arithmetic: Arithmetic,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// Largest taxon count in the table.
    #[arg(long, default_value_t = 10)]
    n: u64,
}

/// An internal consistency check failed; reported with exit code 2.
#[derive(Debug)]
struct InvariantFailure(String);

impl std::fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invariant failure: {}", self.0)
    }
}

impl std::error::Error for InvariantFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    let internal = err.chain().any(|cause| {
        cause.is::<InvariantFailure>()
            || matches!(
                cause.downcast_ref::<nnet_core::Error>(),
                Some(nnet_core::Error::Invariant(_) | nnet_core::Error::NonConvergence { .. })
            )
    });
    if internal {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Nnet(args) => commands::nnet(&args),
        Command::Nj(args) => commands::nj(&args),
        Command::Tsp(args) => commands::tsp(&args),
        Command::Check(args) => commands::check(&args),
        Command::Estimate(args) => commands::estimate(&args),
        Command::Length(args) => commands::length(&args),
        Command::Enumerate(args) => commands::enumerate(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

impl From<Round> for RoundMode {
    fn from(round: Round) -> Self {
        match round {
            Round::Tsplib => RoundMode::Tsplib,
            Round::None => RoundMode::None,
        }
    }
}
