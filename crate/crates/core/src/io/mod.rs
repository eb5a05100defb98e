//! File formats: PHYLIP distances, Nexus splits, Newick trees and JSON-lines traces.

mod newick;
mod nexus;
mod phylip;
mod trace;

pub use newick::nj_newick;
pub use nexus::{read_nexus, write_nexus, NexusSplits};
pub use phylip::{default_labels, read_phylip, write_phylip, LabeledMatrix, ASYMMETRY_TOLERANCE};
pub use trace::trace_to_json_lines;
