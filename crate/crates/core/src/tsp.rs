//! Tours, neighbor-net as a greedy TSP heuristic, exhaustive TSP for small
//! instances, and a reader for TSPLIB `EUC_2D` files.

use std::str::FromStr;

use crate::agglomerate::{run_neighbor_net, WeightingScheme};
use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::ordering::{canonical_orderings, CircularOrdering};
use crate::scalar::{sum, Scalar};

/// Largest instance [`brute_force_tsp`] accepts.
pub const BRUTE_FORCE_TSP_CAP: usize = 11;

#[derive(Clone, Debug, PartialEq)]
pub struct Tour<T = f64> {
    pub ordering: CircularOrdering,
    /// Full cycle length.
    pub length: T,
}

/// `Σ d(x_k, x_{k+1})` over the `n` cycle edges.
pub fn tour_length<T: Scalar>(d: &DissimilarityMap<T>, ordering: &CircularOrdering) -> T {
    sum(ordering.edges().map(|(a, b)| d.get(a, b).clone()))
}

/// Neighbor-net with the balanced TSP weighting, read as a tour.
pub fn greedy_tsp<T: Scalar>(d: &DissimilarityMap<T>) -> Result<Tour<T>> {
    greedy_tsp_with(d, WeightingScheme::BalancedTsp)
}

/// Neighbor-net with any weighting scheme, read as a tour.
pub fn greedy_tsp_with<T: Scalar>(d: &DissimilarityMap<T>, scheme: WeightingScheme) -> Result<Tour<T>> {
    let ordering = run_neighbor_net(d, scheme)?.ordering;
    let length = tour_length(d, &ordering);
    Ok(Tour { ordering, length })
}

/// Exact shortest tour over all canonical orderings; ties go to the
/// lexicographically least ordering.
pub fn brute_force_tsp<T: Scalar>(d: &DissimilarityMap<T>) -> Result<Tour<T>> {
    let n = d.n();
    if n > BRUTE_FORCE_TSP_CAP {
        return Err(Error::CapExceeded {
            count: format!("{n} taxa"),
            cap: BRUTE_FORCE_TSP_CAP,
        });
    }
    let mut best: Option<Tour<T>> = None;
    for ordering in canonical_orderings(n)? {
        let length = tour_length(d, &ordering);
        if best.as_ref().is_none_or(|b| length.definitely_less(&b.length)) {
            best = Some(Tour { ordering, length });
        }
    }
    best.ok_or_else(|| Error::Invariant("no ordering enumerated".to_string()))
}

/// Reverses the stretch of the ordering between positions `i + 1` and `k`
/// (inclusive), replacing the edges `(x_i, x_{i+1})` and `(x_k, x_{k+1})` by
/// `(x_i, x_k)` and `(x_{i+1}, x_{k+1})`.
pub fn two_opt_move(ordering: &CircularOrdering, i: usize, k: usize) -> Result<CircularOrdering> {
    let n = ordering.n();
    if !(i < k && k < n) {
        return Err(Error::InvalidArgument(format!(
            "positions ({i}, {k}) out of order for {n} taxa"
        )));
    }
    let mut order = ordering.as_slice().to_vec();
    order[i + 1..=k].reverse();
    CircularOrdering::new(order)
}

/// First pair of positions `(i, k)`, `k > i + 1`, where the exchange of
/// [`two_opt_move`] strictly shortens the tour.
pub fn find_improving_two_opt<T: Scalar>(
    d: &DissimilarityMap<T>,
    ordering: &CircularOrdering,
) -> Option<(usize, usize)> {
    let n = ordering.n();
    let x = |k: usize| ordering.at(k);
    for i in 0..n {
        for k in (i + 2)..n {
            if i == 0 && k == n - 1 {
                continue;
            }
            let before = d.get(x(i), x(i + 1)).clone() + d.get(x(k), x(k + 1)).clone();
            let after = d.get(x(i), x(k)).clone() + d.get(x(i + 1), x(k + 1)).clone();
            if after.definitely_less(&before) {
                return Some((i, k));
            }
        }
    }
    None
}

/// How `EUC_2D` distances are turned into dissimilarities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RoundMode {
    /// TSPLIB's `nint`, rounding to the nearest integer.
    Tsplib,
    /// Plain Euclidean distance.
    #[default]
    None,
}

impl FromStr for RoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsplib" => Ok(RoundMode::Tsplib),
            "none" => Ok(RoundMode::None),
            other => Err(Error::InvalidArgument(format!("unknown rounding mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TsplibInstance {
    pub name: Option<String>,
    pub coords: Vec<(f64, f64)>,
    pub dissimilarity: DissimilarityMap,
}

/// Parses the `EUC_2D` subset of TSPLIB: a `KEY : value` header followed by
/// `NODE_COORD_SECTION` lines `index x y`, optionally ended by `EOF`.
pub fn read_tsplib_euc2d(text: &str, round: RoundMode) -> Result<TsplibInstance> {
    let mut name = None;
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut in_coords = false;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(line_no, "expected `index x y`"));
            }
            let index: usize = fields[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad node index {:?}", fields[0])))?;
            let coord = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::parse(line_no, format!("bad coordinate {s:?}")))
            };
            let (x, y) = (coord(fields[1])?, coord(fields[2])?);
            if index == 0 || index > coords.len() {
                return Err(Error::parse(
                    line_no,
                    format!("node index {index} outside 1..={}", coords.len()),
                ));
            }
            if coords[index - 1].replace((x, y)).is_some() {
                return Err(Error::parse(line_no, format!("node {index} listed twice")));
            }
            continue;
        }
        if line == "NODE_COORD_SECTION" {
            let n = dimension.ok_or_else(|| Error::parse(line_no, "DIMENSION missing before coordinates"))?;
            match weight_type.as_deref() {
                Some("EUC_2D") => {}
                Some(other) => return Err(Error::parse(line_no, format!("unsupported EDGE_WEIGHT_TYPE {other}"))),
                None => return Err(Error::parse(line_no, "EDGE_WEIGHT_TYPE missing")),
            }
            coords = vec![None; n];
            in_coords = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(Error::parse(line_no, format!("unexpected line {line:?}")));
        };
        let value = value.trim();
        match key.trim() {
            "NAME" => name = Some(value.to_string()),
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad DIMENSION {value:?}")))?,
                )
            }
            "EDGE_WEIGHT_TYPE" => weight_type = Some(value.to_string()),
            "TYPE" if value != "TSP" => return Err(Error::parse(line_no, format!("unsupported TYPE {value}"))),
            _ => {}
        }
    }

    if !in_coords {
        return Err(Error::parse(0, "NODE_COORD_SECTION missing"));
    }
    let missing = coords.iter().filter(|c| c.is_none()).count();
    if missing > 0 {
        return Err(Error::parse(
            0,
            format!("{missing} of {} coordinates missing", coords.len()),
        ));
    }
    let coords: Vec<(f64, f64)> = coords.into_iter().flatten().collect();
    let dissimilarity = DissimilarityMap::from_fn(coords.len(), |i, j| {
        let (a, b) = (coords[i], coords[j]);
        let e = (a.0 - b.0).hypot(a.1 - b.1);
        match round {
            RoundMode::Tsplib => (e + 0.5).floor(),
            RoundMode::None => e,
        }
    })?;
    Ok(TsplibInstance {
        name,
        coords,
        dissimilarity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> DissimilarityMap {
        DissimilarityMap::from_fn(n, |_, _| 1.0).unwrap()
    }

    #[test]
    fn unit_tour_length_is_n() {
        let o = CircularOrdering::identity(5).unwrap();
        assert_eq!(tour_length(&ones(5), &o), 5.0);
    }

    #[test]
    fn brute_force_breaks_ties_lexicographically() {
        let t = brute_force_tsp(&ones(6)).unwrap();
        assert_eq!(t.ordering.as_slice(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(t.length, 6.0);
        assert!(brute_force_tsp(&ones(12)).is_err());
    }

    #[test]
    fn two_opt_replaces_two_edges() {
        let d = DissimilarityMap::from_fn(5, |i, j| (i as f64 - j as f64).abs()).unwrap();
        let bad = CircularOrdering::new(vec![0, 2, 1, 3, 4]).unwrap();
        let (i, k) = find_improving_two_opt(&d, &bad).unwrap();
        let better = two_opt_move(&bad, i, k).unwrap();
        assert!(tour_length(&d, &better) < tour_length(&d, &bad));
    }

    #[test]
    fn reads_two_points_in_both_modes() {
        let text = "NAME : pair\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 1.4\nEOF\n";
        let exact = read_tsplib_euc2d(text, RoundMode::None).unwrap();
        let rounded = read_tsplib_euc2d(text, RoundMode::Tsplib).unwrap();
        assert_eq!(exact.name.as_deref(), Some("pair"));
        assert_eq!(*exact.dissimilarity.get(0, 1), 5.0);
        assert_eq!(*rounded.dissimilarity.get(0, 1), 5.0);
        assert!((exact.dissimilarity.get(0, 2) - 1.4).abs() < 1e-12);
        assert_eq!(*rounded.dissimilarity.get(0, 2), 1.0);
    }

    #[test]
    fn rejects_malformed_headers() {
        let other = "DIMENSION : 3\nEDGE_WEIGHT_TYPE : GEO\nNODE_COORD_SECTION\n1 0 0\n";
        assert!(read_tsplib_euc2d(other, RoundMode::None).is_err());
        let short = "DIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n";
        assert!(read_tsplib_euc2d(short, RoundMode::None).is_err());
        let no_dim = "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n";
        assert!(read_tsplib_euc2d(no_dim, RoundMode::None).is_err());
    }
}
