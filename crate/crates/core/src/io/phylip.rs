use std::collections::HashSet;
use std::fmt::Write;

use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};

/// Relative asymmetry tolerated before a matrix is rejected.
pub const ASYMMETRY_TOLERANCE: f64 = 1e-6;

/// A distance matrix with taxon labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledMatrix {
    pub labels: Vec<String>,
    pub matrix: DissimilarityMap,
}

/// Reads a square PHYLIP distance matrix: the taxon count, then one row per
/// taxon of a label followed by `n` distances. Rows may wrap onto
/// continuation lines. The two triangles are averaged.
pub fn read_phylip(text: &str) -> Result<LabeledMatrix> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(k, line)| line.split_whitespace().map(move |t| (k + 1, t)));
    let (line, first) = tokens.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::parse(line, format!("expected taxon count, found {first:?}")))?;
    if n < 3 {
        return Err(Error::parse(line, format!("need at least 3 taxa, found {n}")));
    }

    let mut labels = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    for r in 0..n {
        let (line, label) = tokens
            .next()
            .ok_or_else(|| Error::parse(line, format!("missing row {}", r + 1)))?;
        if !seen.insert(label.to_string()) {
            return Err(Error::parse(line, format!("duplicate label {label:?}")));
        }
        labels.push(label.to_string());
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            let Some((line, tok)) = tokens.next() else {
                return Err(Error::parse(
                    line,
                    format!("row {label:?} is short: square matrix required"),
                ));
            };
            let v: f64 = tok.parse().map_err(|_| {
                Error::parse(
                    line,
                    format!("bad distance {tok:?} in row {label:?}: square matrix required"),
                )
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::parse(
                    line,
                    format!("distance {tok} in row {label:?} is negative or not finite"),
                ));
            }
            row.push(v);
        }
        rows.push(row);
    }
    if let Some((line, tok)) = tokens.next() {
        return Err(Error::parse(line, format!("unexpected trailing token {tok:?}")));
    }

    for i in 0..n {
        if rows[i][i] != 0.0 {
            return Err(Error::InvalidDissimilarity(format!(
                "nonzero diagonal for {:?}",
                labels[i]
            )));
        }
        for j in (i + 1)..n {
            let (a, b) = (rows[i][j], rows[j][i]);
            if (a - b).abs() > ASYMMETRY_TOLERANCE * a.abs().max(b.abs()) {
                return Err(Error::InvalidDissimilarity(format!(
                    "asymmetric entries {a} and {b} for {:?} and {:?}",
                    labels[i], labels[j]
                )));
            }
        }
    }
    let matrix = DissimilarityMap::from_fn(n, |i, j| (rows[i][j] + rows[j][i]) / 2.0)?;
    Ok(LabeledMatrix { labels, matrix })
}

/// Writes a square PHYLIP matrix with shortest round-trip numbers.
pub fn write_phylip(labels: &[String], d: &DissimilarityMap) -> String {
    let mut out = format!("{}\n", d.n());
    for (i, label) in labels.iter().enumerate() {
        out.push_str(label);
        for v in d.row(i) {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Labels `t1, t2, ...` for unlabeled inputs.
pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("t{k}")).collect()
}
