use crate::agglomerate::NjResult;
use crate::error::{Error, Result};

fn newick_label(label: &str) -> String {
    if label.chars().any(|c| "()[]':;, \t".contains(c)) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

/// The neighbor-joining tree as unrooted Newick without branch lengths: the
/// merge history down to three subtrees, joined at a trifurcation.
pub fn nj_newick(result: &NjResult, labels: &[String]) -> Result<String> {
    let n = labels.len();
    let mut subtrees: Vec<(Vec<usize>, String)> = (0..n).map(|t| (vec![t], newick_label(&labels[t]))).collect();
    for (a, b) in result.joins.iter().take(n.saturating_sub(3)) {
        let mut take = |members: &Vec<usize>| -> Result<String> {
            let k = subtrees
                .iter()
                .position(|(m, _)| {
                    let mut sorted = m.clone();
                    sorted.sort_unstable();
                    let mut want = members.clone();
                    want.sort_unstable();
                    sorted == want
                })
                .ok_or_else(|| Error::Invariant(format!("join of unknown cluster {members:?}")))?;
            Ok(subtrees.swap_remove(k).1)
        };
        let left = take(a)?;
        let right = take(b)?;
        let mut members = a.clone();
        members.extend_from_slice(b);
        subtrees.push((members, format!("({left},{right})")));
    }
    if subtrees.len() != 3 {
        return Err(Error::Invariant(
            "merge history does not leave three subtrees".to_string(),
        ));
    }
    subtrees.sort_by_key(|(m, _)| m.iter().copied().min());
    let parts: Vec<&str> = subtrees.iter().map(|(_, t)| t.as_str()).collect();
    Ok(format!("({});", parts.join(",")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agglomerate::neighbor_joining;
    use crate::dissimilarity::DissimilarityMap;

    #[test]
    fn quartet_cherries() {
        let d = DissimilarityMap::from_rows(vec![
            vec![0.0, 2.0, 5.0, 5.0],
            vec![2.0, 0.0, 5.0, 5.0],
            vec![5.0, 5.0, 0.0, 2.0],
            vec![5.0, 5.0, 2.0, 0.0],
        ])
        .unwrap();
        let nj = neighbor_joining(&d, 0.5).unwrap();
        let labels: Vec<String> = ["a", "b", "c", "d x"].iter().map(|s| s.to_string()).collect();
        let text = nj_newick(&nj, &labels).unwrap();
        assert_eq!(text, "((a,b),c,'d x');");
    }
}
