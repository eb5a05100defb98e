//! Agglomeration traces as JSON lines, one record per merge.
//!
//! Fields: `step`, `blocks` (count before the merge), `first` and `second`
//! (the two selected paths), `q`, `i`, `j`, `q_hat`, `endpoint_score`,
//! `merged` (the joined path), `split` (taxa on the side of taxon 0, or
//! `null` for the last merge) and `mu` (weights after the merge).

use serde_json::json;

use crate::agglomerate::AgglomerationTrace;
use crate::scalar::Scalar;

pub fn trace_to_json_lines<T: Scalar>(trace: &AgglomerationTrace<T>) -> String {
    let mut out = String::new();
    for step in trace {
        let record = json!({
            "step": step.step,
            "blocks": step.blocks_before,
            "first": step.first_block,
            "second": step.second_block,
            "q": step.q_value.to_f64(),
            "i": step.i,
            "j": step.j,
            "q_hat": step.q_hat.to_f64(),
            "endpoint_score": step.endpoint_score.to_f64(),
            "merged": step.merged_path,
            "split": step.split.as_ref().map(|s| s.block_with_zero().iter().collect::<Vec<_>>()),
            "mu": step.mu.iter().map(Scalar::to_f64).collect::<Vec<_>>(),
        });
        out.push_str(&record.to_string());
        out.push('\n');
    }
    out
}
