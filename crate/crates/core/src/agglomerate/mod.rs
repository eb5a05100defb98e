//! The neighbor-net agglomeration engine and a plain neighbor-joining
//! implementation to compare it against.

mod engine;
mod nj;
mod state;
mod weighting;

pub use engine::{
    run_neighbor_net, run_neighbor_net_with, AgglomerationTrace, EndpointRule, NeighborNetOptions, NeighborNetResult,
    TraceStep,
};
pub use nj::{neighbor_joining, NjResult};
pub use state::{BlockDistanceState, MergeOutcome};
pub use weighting::WeightingScheme;
