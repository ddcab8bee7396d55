#![allow(dead_code)]

use rand::Rng;
use unital_core::construct::{random_block_sum, BlockSum};
use unital_core::linalg::{ComplexMatrix, C64};
use unital_core::random::{random_subspace_basis, random_unitary, SeededRng};
use unital_core::{Subspace, Tolerances};

pub fn tol() -> Tolerances {
    Tolerances::default()
}

/// Random composition of `d` into 1..=max_part sized parts.
pub fn random_partition(d: usize, max_part: usize, rng: &mut SeededRng) -> Vec<usize> {
    let mut dims = Vec::new();
    let mut left = d;
    while left > 0 {
        let part = rng.random_range(1..=left.min(max_part));
        dims.push(part);
        left -= part;
    }
    dims
}

/// A rotated block sum at a random dimension in `2..=max_dim`. About a third
/// of the draws are a single irreducible block.
pub fn random_structured(max_dim: usize, rng: &mut SeededRng) -> BlockSum {
    let d = rng.random_range(2..=max_dim);
    let dims = if rng.random_range(0..3) == 0 {
        vec![d]
    } else {
        random_partition(d, d - 1, rng)
    };
    random_block_sum(&dims, rng, &tol()).unwrap()
}

/// Either the span of a random proper subset of the embedded blocks
/// (invariant) or a Haar-random subspace (generically not invariant).
pub fn random_test_subspace(bs: &BlockSum, rng: &mut SeededRng) -> Subspace {
    let d = bs.channel.dim();
    let n = bs.blocks.len();
    if n > 1 && rng.random_bool(0.5) {
        let mut chosen: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if chosen.is_empty() || chosen.len() == n {
            chosen = vec![rng.random_range(0..n)];
        }
        span_of(&chosen.iter().map(|&j| &bs.blocks[j]).collect::<Vec<_>>())
    } else {
        let k = rng.random_range(1..d);
        Subspace::new(random_subspace_basis(d, k, rng)).unwrap()
    }
}

pub fn span_of(parts: &[&Subspace]) -> Subspace {
    let d = parts[0].ambient_dim();
    let k: usize = parts.iter().map(|s| s.dim()).sum();
    let mut basis = ComplexMatrix::zeros(d, k);
    let mut col = 0;
    for s in parts {
        basis.columns_mut(col, s.dim()).copy_from(s.basis());
        col += s.dim();
    }
    Subspace::new(basis).unwrap()
}

/// Random unitary of size `k ≥ n` for remixing an `n`-element Kraus list.
pub fn remix_unitary(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let extra = rng.random_range(0..=2);
    random_unitary(n + extra, rng)
}

pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

pub fn scalar(x: f64) -> C64 {
    C64::new(x, 0.0)
}
