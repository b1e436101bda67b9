//! Benchmark fixtures.

use equilog::symcore::{partitions, IrrDecomposition};

/// Every irreducible of S_n once.
pub fn all_irreducibles(n: usize) -> IrrDecomposition {
    IrrDecomposition::from_pairs(n, partitions(n).into_iter().map(|p| (p, 1))).expect("partitions of n")
}
