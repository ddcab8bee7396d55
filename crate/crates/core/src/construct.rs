//! Channels with a known invariant-subspace structure: direct sums of
//! irreducible blocks rotated by a Haar unitary.

use rand::Rng;

use crate::channel::{random_unital_kraus, KrausChannel};
use crate::error::{Error, Result};
use crate::iris::Subspace;
use crate::linalg::{identity, ComplexMatrix};
use crate::random::random_unitary;
use crate::tolerance::Tolerances;

/// Number of Haar unitaries mixed into each generic block.
pub const BLOCK_UNITARIES: usize = 3;

/// A rotated direct sum together with the subspaces it was built from.
#[derive(Debug, Clone)]
pub struct BlockSum {
    pub channel: KrausChannel,
    /// `U·span(e_k : k in block j)`, in construction order.
    pub blocks: Vec<Subspace>,
    pub unitary: ComplexMatrix,
}

/// A block that is irreducible with probability one: the identity on `C^1`,
/// or an equal mixture of [`BLOCK_UNITARIES`] Haar unitaries otherwise.
pub fn irreducible_block<R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<KrausChannel> {
    match dim {
        0 => Err(Error::InvalidParameter(
            "block dimension must be positive".into(),
        )),
        1 => KrausChannel::new(vec![identity(1)], tol),
        _ => KrausChannel::new(random_unital_kraus(dim, BLOCK_UNITARIES, rng), tol),
    }
}

/// `U (⊕_j φ_j) U†`, with `U` Haar random when `rotate` is set.
pub fn block_sum_of<R: Rng + ?Sized>(
    parts: &[KrausChannel],
    rotate: bool,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<BlockSum> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("at least one block is required".into()))?;
    let mut sum = first.clone();
    for part in rest {
        sum = KrausChannel::direct_sum(&sum, part, None, tol)?;
    }
    let dim = sum.dim();
    let unitary = if rotate {
        random_unitary(dim, rng)
    } else {
        identity(dim)
    };
    let channel = sum.conjugated(&unitary, tol)?;
    let mut blocks = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for part in parts {
        blocks.push(Subspace::new(
            unitary.columns(offset, part.dim()).into_owned(),
        )?);
        offset += part.dim();
    }
    Ok(BlockSum {
        channel,
        blocks,
        unitary,
    })
}

/// Haar-rotated direct sum of fresh [`irreducible_block`]s of the given
/// dimensions.
pub fn random_block_sum<R: Rng + ?Sized>(
    dims: &[usize],
    rng: &mut R,
    tol: &Tolerances,
) -> Result<BlockSum> {
    let parts = dims
        .iter()
        .map(|&d| irreducible_block(d, rng, tol))
        .collect::<Result<Vec<_>>>()?;
    block_sum_of(&parts, true, rng, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iris::{iris_decompose, is_invariant_subspace};
    use crate::random::seeded_rng;

    #[test]
    fn embedded_blocks_are_invariant() {
        let tol = Tolerances::default();
        let bs = random_block_sum(&[2, 1, 3], &mut seeded_rng(4), &tol).unwrap();
        assert_eq!(bs.channel.dim(), 6);
        for b in &bs.blocks {
            assert!(
                is_invariant_subspace(&bs.channel, b, &tol)
                    .unwrap()
                    .invariant
            );
        }
        let mut dims = iris_decompose(&bs.channel, &tol, 0).unwrap().dimensions();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 3]);
    }

    #[test]
    fn rejects_empty_input() {
        let tol = Tolerances::default();
        assert!(random_block_sum(&[], &mut seeded_rng(0), &tol).is_err());
        assert!(random_block_sum(&[0], &mut seeded_rng(0), &tol).is_err());
    }
}
