//! Exact counting identities for neighbor-net outputs.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, x| acc * x)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn require_three(n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewTaxa { n: n as usize, min: 3 });
    }
    Ok(())
}

/// `(2n-5)! / (n-3)!`
pub fn count_nnet_outputs(n: u64) -> Result<BigUint> {
    require_three(n)?;
    Ok(factorial(2 * n - 5) / factorial(n - 3))
}

/// Catalan number `C(2n-4, n-2) / (n-1)`.
pub fn count_associahedron_vertices(n: u64) -> Result<BigUint> {
    require_three(n)?;
    Ok(binomial(2 * n - 4, n - 2) / BigUint::from(n - 1))
}

/// `(n-1)! / 2`
pub fn count_distinct_orderings(n: u64) -> Result<BigUint> {
    require_three(n)?;
    Ok(factorial(n - 1) / BigUint::from(2u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn output_counts_follow_the_published_sequence() {
        let expected = [1u64, 6, 60, 840, 15120, 332640, 8648640, 259459200];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(count_nnet_outputs(k as u64 + 3).unwrap(), u(e));
        }
    }

    #[test]
    fn small_catalan_and_ordering_counts() {
        assert_eq!(count_associahedron_vertices(3).unwrap(), u(1));
        assert_eq!(count_associahedron_vertices(4).unwrap(), u(2));
        assert_eq!(count_associahedron_vertices(5).unwrap(), u(5));
        assert_eq!(count_distinct_orderings(3).unwrap(), u(1));
        assert_eq!(count_distinct_orderings(4).unwrap(), u(3));
        assert_eq!(count_distinct_orderings(5).unwrap(), u(12));
    }

    #[test]
    fn product_identity() {
        for n in 4..=12u64 {
            assert_eq!(
                count_associahedron_vertices(n).unwrap() * count_distinct_orderings(n).unwrap(),
                count_nnet_outputs(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn no_overflow_past_twenty() {
        assert_eq!(count_distinct_orderings(22).unwrap(), factorial(21) / u(2));
        assert!(count_nnet_outputs(40).is_ok());
    }

    #[test]
    fn rejects_small_n() {
        assert!(count_nnet_outputs(2).is_err());
        assert!(count_associahedron_vertices(0).is_err());
        assert!(count_distinct_orderings(2).is_err());
    }
}
