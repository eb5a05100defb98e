//! Neighbor-net agglomeration for circular split systems, with split-weight
//! estimation, balanced-length analysis, Kalmanson checks and TSP tools.

pub mod agglomerate;
pub mod counting;
pub mod dissimilarity;
pub mod error;
pub mod generate;
pub mod io;
pub mod kalmanson;
pub mod length;
pub mod ordering;
pub mod scalar;
pub mod split;
pub mod tsp;
pub mod weights;

pub use agglomerate::{
    neighbor_joining, run_neighbor_net, run_neighbor_net_with, AgglomerationTrace, BlockDistanceState, EndpointRule,
    NeighborNetOptions, NeighborNetResult, NjResult, TraceStep, WeightingScheme,
};
pub use counting::{count_associahedron_vertices, count_distinct_orderings, count_nnet_outputs};
pub use dissimilarity::DissimilarityMap;
pub use error::{Error, Result};
pub use ordering::{canonical_orderings, CircularOrdering, NodeWeighting, PartialCircularOrdering};
pub use scalar::{Rational, Scalar};
pub use split::{is_pairwise_compatible, metric_from_splits, Split, TaxonSet, WeightedSplitSystem};
pub use tsp::{brute_force_tsp, greedy_tsp, tour_length, Tour};
