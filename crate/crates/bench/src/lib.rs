//! Fixtures shared by the benchmarks.

use unital_core::random::seeded_rng;
use unital_core::{random_block_sum, BlockSum, IrisDecomposition, Subspace, Tolerances};

/// Rotated direct sum of random irreducible blocks, fixed by `seed`.
pub fn block_sum(dims: &[usize], seed: u64) -> BlockSum {
    random_block_sum(dims, &mut seeded_rng(seed), &Tolerances::default())
        .expect("valid block dimensions")
}

/// Two certified decompositions of the same channel: the embedded blocks, and
/// the same blocks in reverse order with their bases rotated.
pub fn matching_pair(bs: &BlockSum, seed: u64) -> (IrisDecomposition, IrisDecomposition) {
    let tol = Tolerances::default();
    let mut rng = seeded_rng(seed);
    let left = IrisDecomposition::certify(&bs.channel, bs.blocks.clone(), &tol)
        .expect("embedded blocks are invariant");
    let rotated = bs
        .blocks
        .iter()
        .rev()
        .map(|s| {
            Subspace::new(s.basis() * unital_core::random::random_unitary(s.dim(), &mut rng))
                .unwrap()
        })
        .collect();
    let right = IrisDecomposition::certify(&bs.channel, rotated, &tol)
        .expect("rotated blocks are invariant");
    (left, right)
}
