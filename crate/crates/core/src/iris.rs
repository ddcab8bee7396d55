//! Invariant subspaces and the decomposition of a unital channel into
//! irreducible invariant subspaces (IrIS).
//!
//! A subspace `S` is invariant when `φ(P_S) = P_S`; equivalently every Kraus
//! operator has vanishing off-diagonal blocks between `S` and `S^⊥`. The
//! decomposition draws a random element of the commutant, splits the space
//! into its eigenspaces and recurses on the restricted channels until every
//! block has a scalar commutant.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::fixed::commutant_basis;
use crate::linalg::{
    cluster_sorted, hermitian_eig_unchecked, identity, max_abs, max_abs_diff,
    orthonormal_complement, orthonormality_deviation, projector, ComplexMatrix, C64,
    ORTHONORMAL_TOL,
};
use crate::random::{seeded_rng, SeededRng};
use crate::tolerance::Tolerances;

/// Orthonormal basis of a nonzero subspace of `C^ambient_dim`.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn new(basis: ComplexMatrix) -> Result<Self> {
        if basis.ncols() == 0 || basis.nrows() == 0 {
            return Err(Error::InvalidParameter("subspace must be nonzero".into()));
        }
        if basis.ncols() > basis.nrows() {
            return Err(Error::NotOrthonormal {
                deviation: f64::INFINITY,
            });
        }
        let deviation = orthonormality_deviation(&basis);
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { basis })
    }

    pub fn full(dim: usize) -> Self {
        Self {
            basis: identity(dim),
        }
    }

    /// Span of the computational basis vectors `e_i` for `i` in `indices`.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let mut basis = ComplexMatrix::zeros(ambient_dim, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if i >= ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: i + 1,
                });
            }
            basis[(i, j)] = C64::new(1.0, 0.0);
        }
        Self::new(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn projector(&self) -> ComplexMatrix {
        projector(&self.basis)
    }

    /// `None` when the subspace is the whole space.
    pub fn complement(&self) -> Option<Subspace> {
        let comp = orthonormal_complement(&self.basis, self.ambient_dim())
            .expect("subspace basis is orthonormal by construction");
        (comp.ncols() > 0).then_some(Subspace { basis: comp })
    }

    /// Max-entry distance between projectors.
    pub fn projector_distance(&self, other: &Subspace) -> f64 {
        max_abs_diff(&self.projector(), &other.projector())
    }

    /// Multiplies each basis column by a phase so that its first entry of
    /// non-negligible magnitude is real and positive.
    fn canonicalize_phases(&mut self) {
        for mut col in self.basis.column_iter_mut() {
            if let Some(z) = col.iter().find(|z| z.norm() > 1e-8).copied() {
                let phase = z.conj() / z.norm();
                for x in col.iter_mut() {
                    *x *= phase;
                }
            }
        }
    }
}

fn ensure_ambient(ch: &KrausChannel, s: &Subspace) -> Result<()> {
    if s.ambient_dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            found: s.ambient_dim(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceCheck {
    pub invariant: bool,
    /// `max |φ(P_S) − P_S|`.
    pub residual: f64,
}

pub fn is_invariant_subspace(
    ch: &KrausChannel,
    s: &Subspace,
    tol: &Tolerances,
) -> Result<InvarianceCheck> {
    ensure_ambient(ch, s)?;
    let p = s.projector();
    let residual = max_abs_diff(&ch.apply_unchecked(&p), &p);
    Ok(InvarianceCheck {
        invariant: residual <= tol.residual,
        residual,
    })
}

/// `max_i max(|P_⊥ A_i P_S|, |P_S A_i P_⊥|)`.
pub fn offdiagonal_residual(ch: &KrausChannel, s: &Subspace) -> Result<f64> {
    ensure_ambient(ch, s)?;
    let p = s.projector();
    let p_perp = identity(ch.dim()) - &p;
    Ok(ch
        .kraus()
        .iter()
        .map(|a| max_abs(&(&p_perp * a * &p)).max(max_abs(&(&p * a * &p_perp))))
        .fold(0.0, f64::max))
}

/// The channel `σ ↦ ∑ (B†A_iB) σ (B†A_iB)†` on `B(S)`, with `B` the basis of
/// `S`.
pub fn restrict(ch: &KrausChannel, s: &Subspace, tol: &Tolerances) -> Result<KrausChannel> {
    let check = is_invariant_subspace(ch, s, tol)?;
    if !check.invariant {
        return Err(Error::NotInvariant {
            residual: check.residual,
        });
    }
    let b = s.basis();
    let kraus = ch.kraus().iter().map(|a| b.adjoint() * a * b).collect();
    KrausChannel::new(kraus, tol)
}

/// Pairwise-orthogonal irreducible invariant subspaces covering the space.
///
/// Blocks are sorted by dimension, ties broken by the lexicographic order of
/// the (rounded, phase-fixed) leading basis vector.
#[derive(Debug, Clone)]
pub struct IrisDecomposition {
    ambient_dim: usize,
    blocks: Vec<Subspace>,
    irreducibility_certificates: Vec<usize>,
}

impl IrisDecomposition {
    /// Verifies that `blocks` is an IrIS decomposition of `ch`: orthogonal,
    /// complete, each block invariant with a scalar restricted commutant.
    pub fn certify(ch: &KrausChannel, blocks: Vec<Subspace>, tol: &Tolerances) -> Result<Self> {
        let ambient_dim = ch.dim();
        let total: usize = blocks.iter().map(Subspace::dim).sum();
        if total != ambient_dim {
            return Err(Error::ToleranceFailure(format!(
                "block dimensions sum to {total}, expected {ambient_dim}"
            )));
        }
        for (a, sa) in blocks.iter().enumerate() {
            ensure_ambient(ch, sa)?;
            for sb in &blocks[a + 1..] {
                let overlap = max_abs(&(sa.basis().adjoint() * sb.basis()));
                if overlap > 1e-9 {
                    return Err(Error::ToleranceFailure(format!(
                        "blocks overlap ({overlap:e})"
                    )));
                }
            }
        }
        let mut certificates = Vec::with_capacity(blocks.len());
        for s in &blocks {
            let off = offdiagonal_residual(ch, s)?;
            if off > tol.residual {
                return Err(Error::ToleranceFailure(format!(
                    "block of dimension {} is not invariant (off-diagonal residual {off:e})",
                    s.dim()
                )));
            }
            let restricted = restrict(ch, s, tol).map_err(|e| {
                Error::ToleranceFailure(format!("restriction failed certification: {e}"))
            })?;
            let count = commutant_basis(&restricted, tol).count();
            if count != 1 {
                return Err(Error::ToleranceFailure(format!(
                    "block of dimension {} is reducible (commutant count {count})",
                    s.dim()
                )));
            }
            certificates.push(count);
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.canonicalize_phases();
        }
        blocks.sort_by(block_order);
        Ok(Self {
            ambient_dim,
            blocks,
            irreducibility_certificates: certificates,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn blocks(&self) -> &[Subspace] {
        &self.blocks
    }

    pub fn irreducibility_certificates(&self) -> &[usize] {
        &self.irreducibility_certificates
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.blocks.iter().map(Subspace::dim).collect()
    }

    /// Unitary whose columns are the concatenated block bases.
    pub fn block_unitary(&self) -> ComplexMatrix {
        let mut w = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        let mut col = 0;
        for b in &self.blocks {
            w.columns_mut(col, b.dim()).copy_from(b.basis());
            col += b.dim();
        }
        w
    }

    /// `W† A_i W` for each Kraus operator: block diagonal in the block order.
    pub fn block_diagonal_kraus(&self, ch: &KrausChannel) -> Vec<ComplexMatrix> {
        let w = self.block_unitary();
        ch.kraus().iter().map(|a| w.adjoint() * a * &w).collect()
    }

    /// Restrictions of `ch` to each block, in block order.
    pub fn restricted_channels(
        &self,
        ch: &KrausChannel,
        tol: &Tolerances,
    ) -> Result<Vec<KrausChannel>> {
        self.blocks.iter().map(|s| restrict(ch, s, tol)).collect()
    }
}

fn block_order(a: &Subspace, b: &Subspace) -> Ordering {
    a.dim().cmp(&b.dim()).then_with(|| {
        let key = |s: &Subspace| -> Vec<(i64, i64)> {
            s.basis()
                .column(0)
                .iter()
                .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
                .collect()
        };
        // Larger leading entries first, so the block living on the earliest
        // coordinates sorts first.
        key(b).cmp(&key(a))
    })
}

/// Decomposes the space into irreducible invariant subspaces of `ch`.
/// Deterministic for a given `seed`.
pub fn iris_decompose(ch: &KrausChannel, tol: &Tolerances, seed: u64) -> Result<IrisDecomposition> {
    let mut rng = seeded_rng(seed);
    let mut blocks = Vec::new();
    split_recursive(ch, identity(ch.dim()), tol, &mut rng, &mut blocks)?;
    let blocks = blocks
        .into_iter()
        .map(Subspace::new)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| {
            Error::ToleranceFailure(format!("recovered block lost orthonormality: {e}"))
        })?;
    IrisDecomposition::certify(ch, blocks, tol)
}

const MAX_SPLIT_ATTEMPTS: usize = 8;

fn split_recursive(
    ch: &KrausChannel,
    embedding: ComplexMatrix,
    tol: &Tolerances,
    rng: &mut SeededRng,
    out: &mut Vec<ComplexMatrix>,
) -> Result<()> {
    let basis = commutant_basis(ch, tol);
    if basis.count() == 1 {
        out.push(embedding);
        return Ok(());
    }

    let mut attempt = 0;
    let (eig, clusters) = loop {
        let weights: Vec<f64> = (0..basis.count())
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let sigma = basis.combine(&weights);
        let eig = hermitian_eig_unchecked(&sigma);
        let clusters = cluster_sorted(&eig.values, tol.eigencluster);
        if clusters.len() > 1 {
            break (eig, clusters);
        }
        attempt += 1;
        if attempt >= MAX_SPLIT_ATTEMPTS {
            return Err(Error::ToleranceFailure(format!(
                "commutant of dimension {} yielded no spectral split",
                basis.count()
            )));
        }
    };

    for cluster in clusters {
        let local = Subspace::new(eig.columns(cluster))?;
        let restricted = restrict(ch, &local, tol).map_err(|e| {
            Error::ToleranceFailure(format!("commutant eigenspace is not invariant: {e}"))
        })?;
        split_recursive(&restricted, &embedding * local.basis(), tol, rng, out)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedComponent {
    pub left_blocks: Vec<usize>,
    pub right_blocks: Vec<usize>,
    /// Sorted block dimensions, identical on both sides.
    pub dimensions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionMatching {
    pub components: Vec<MatchedComponent>,
    /// `(left, right)` block index pairs of equal dimension, sorted by left.
    pub bijection: Vec<(usize, usize)>,
}

/// Whether two blocks are joined in the bipartite overlap graph: some basis
/// vector of `a` has squared overlap with `b` above `tol.residual`. Equal
/// subspaces always overlap fully, so equality needs no separate test.
fn blocks_linked(a: &Subspace, b: &Subspace, tol: &Tolerances) -> bool {
    let overlap = a.basis().adjoint() * b.basis();
    overlap
        .row_iter()
        .any(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>() > tol.residual)
}

/// Matches two IrIS decompositions of the same channel through the connected
/// components of their overlap graph.
pub fn match_decompositions(
    left: &IrisDecomposition,
    right: &IrisDecomposition,
    tol: &Tolerances,
) -> Result<DecompositionMatching> {
    if left.ambient_dim() != right.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: left.ambient_dim(),
            found: right.ambient_dim(),
        });
    }
    let m = left.blocks().len();
    let n = right.blocks().len();

    // Vertices 0..m are left blocks, m..m+n right blocks.
    let mut adjacency = vec![Vec::new(); m + n];
    for (i, a) in left.blocks().iter().enumerate() {
        for (j, b) in right.blocks().iter().enumerate() {
            if blocks_linked(a, b, tol) {
                adjacency[i].push(m + j);
                adjacency[m + j].push(i);
            }
        }
    }

    let mut seen = vec![false; m + n];
    let mut components = Vec::new();
    let mut bijection = Vec::new();
    for start in 0..m + n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut left_blocks = Vec::new();
        let mut right_blocks = Vec::new();
        while let Some(v) = stack.pop() {
            if v < m {
                left_blocks.push(v);
            } else {
                right_blocks.push(v - m);
            }
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        left_blocks.sort_unstable();
        right_blocks.sort_unstable();

        let mut left_dims: Vec<usize> = left_blocks
            .iter()
            .map(|&i| left.blocks()[i].dim())
            .collect();
        let mut right_dims: Vec<usize> = right_blocks
            .iter()
            .map(|&j| right.blocks()[j].dim())
            .collect();
        left_dims.sort_unstable();
        right_dims.sort_unstable();
        if left_dims != right_dims {
            return Err(Error::MultisetMismatch(format!(
                "component with left blocks {left_blocks:?} (dims {left_dims:?}) and right blocks \
                 {right_blocks:?} (dims {right_dims:?})"
            )));
        }

        let mut l_sorted = left_blocks.clone();
        let mut r_sorted = right_blocks.clone();
        l_sorted.sort_by_key(|&i| (left.blocks()[i].dim(), i));
        r_sorted.sort_by_key(|&j| (right.blocks()[j].dim(), j));
        bijection.extend(l_sorted.into_iter().zip(r_sorted));

        components.push(MatchedComponent {
            left_blocks,
            right_blocks,
            dimensions: left_dims,
        });
    }
    bijection.sort_unstable();
    Ok(DecompositionMatching {
        components,
        bijection,
    })
}
