//! Fixed points of unital channels.
//!
//! For a unital channel, `φ(σ) = σ` holds exactly when `σ` commutes with every
//! Kraus operator, so the fixed set is computed as the null space of the
//! stacked commutation maps `σ ↦ A_i σ − σ A_i` rather than of `Φ − I`.

use nalgebra::DMatrix;

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::iris::IrisDecomposition;
use crate::linalg::{
    c, ensure_dim, hermitian_deviation, hermitian_part, identity, kron, max_abs, max_abs_diff,
    min_eigenvalue, null_space, r, trace_inner, unvectorize, ComplexMatrix, ComplexVector, C64,
};
use crate::tolerance::Tolerances;

/// Trace-orthonormal basis of the Hermitian operators fixed by a channel.
/// The first element is always `I/√d`.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    dim: usize,
    hermitian_basis: Vec<ComplexMatrix>,
}

impl CommutantBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.hermitian_basis
    }

    pub fn count(&self) -> usize {
        self.hermitian_basis.len()
    }

    /// Orthogonal projection of `sigma` onto the real span of the basis.
    pub fn project(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for h in &self.hermitian_basis {
            out += h * trace_inner(h, sigma);
        }
        out
    }

    /// `∑ w_a H_a` for real weights.
    pub fn combine(&self, weights: &[f64]) -> ComplexMatrix {
        assert_eq!(weights.len(), self.count());
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (w, h) in weights.iter().zip(&self.hermitian_basis) {
            out += h.scale(*w);
        }
        out
    }
}

/// Stacked commutation system `[I ⊗ A_i − A_iᵀ ⊗ I]_i` acting on `vec(σ)`.
pub fn commutation_system(ch: &KrausChannel) -> ComplexMatrix {
    let d = ch.dim();
    let n = d * d;
    let id = identity(d);
    let mut stacked = ComplexMatrix::zeros(n * ch.kraus_count(), n);
    for (i, a) in ch.kraus().iter().enumerate() {
        let block = kron(&id, a) - kron(&a.transpose(), &id);
        stacked.rows_mut(i * n, n).copy_from(&block);
    }
    stacked
}

pub fn commutant_basis(ch: &KrausChannel, tol: &Tolerances) -> CommutantBasis {
    let d = ch.dim();
    let kernel = null_space(&commutation_system(ch), tol);

    let normalized_identity = identity(d).scale(1.0 / (d as f64).sqrt());
    let mut candidates = Vec::with_capacity(2 * kernel.ncols());
    for j in 0..kernel.ncols() {
        let b = unvectorize(&ComplexVector::from(kernel.column(j).into_owned()), d);
        let re_part = hermitian_part(&b);
        let im_part = (&b - b.adjoint()) * c(0.0, -0.5);
        for h in [re_part, im_part] {
            // Strip the identity component; it is prepended explicitly.
            let h = &h - &normalized_identity * trace_inner(&normalized_identity, &h);
            candidates.push(h);
        }
    }

    let mut hermitian_basis = vec![normalized_identity];
    hermitian_basis.extend(real_orthonormalize(&candidates, tol));
    CommutantBasis {
        dim: d,
        hermitian_basis,
    }
}

/// Orthonormal basis (trace inner product) for the real span of Hermitian
/// matrices, via the eigendecomposition of their real Gram matrix.
fn real_orthonormalize(hs: &[ComplexMatrix], tol: &Tolerances) -> Vec<ComplexMatrix> {
    let n = hs.len();
    if n == 0 {
        return Vec::new();
    }
    let gram = DMatrix::<f64>::from_fn(n, n, |a, b| trace_inner(&hs[a], &hs[b]).re);
    let eig = gram.symmetric_eigen();
    // Inputs are built from unit vectors, so the cutoff is absolute: a span
    // made only of rounding noise must come out empty.
    let largest = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = tol.nullspace * largest.max(1.0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order
        .into_iter()
        .filter(|&k| eig.eigenvalues[k] > cutoff)
        .map(|k| {
            let scale = 1.0 / eig.eigenvalues[k].sqrt();
            let mut m = ComplexMatrix::zeros(hs[0].nrows(), hs[0].ncols());
            for (a, h) in hs.iter().enumerate() {
                m += h.scale(eig.eigenvectors[(a, k)] * scale);
            }
            hermitian_part(&m)
        })
        .collect()
}

/// Dimension of the fixed space computed from the null space of `Φ − I`.
/// Kept as an independent route for cross-checks.
pub fn fixed_space_dimension_via_superoperator(ch: &KrausChannel, tol: &Tolerances) -> usize {
    let l = ch.superoperator_matrix();
    let n = l.nrows();
    null_space(&(l - identity(n)), tol).ncols()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedCheck {
    pub fixed: bool,
    /// `max |φ(σ) − σ|`.
    pub fix_residual: f64,
    /// `max_i max |A_i σ − σ A_i|`.
    pub commute_residual: f64,
}

pub fn is_fixed(ch: &KrausChannel, sigma: &ComplexMatrix, tol: &Tolerances) -> Result<FixedCheck> {
    ensure_dim(sigma, ch.dim())?;
    let fix_residual = max_abs_diff(&ch.apply_unchecked(sigma), sigma);
    let commute_residual = ch
        .kraus()
        .iter()
        .map(|a| max_abs_diff(&(a * sigma), &(sigma * a)))
        .fold(0.0, f64::max);
    Ok(FixedCheck {
        fixed: fix_residual <= tol.residual && commute_residual <= tol.residual,
        fix_residual,
        commute_residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureStateCheck {
    pub fixed: bool,
    /// `⟨x|A_i|x⟩` per Kraus operator.
    pub eigenvalues: Vec<C64>,
    /// `max_i ‖A_i x − ⟨x|A_i|x⟩ x‖`.
    pub residual: f64,
}

pub fn fixed_pure_state_check(
    ch: &KrausChannel,
    x: &ComplexVector,
    tol: &Tolerances,
) -> Result<PureStateCheck> {
    if x.len() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            found: x.len(),
        });
    }
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let mut eigenvalues = Vec::with_capacity(ch.kraus_count());
    let mut residual = 0.0_f64;
    for a in ch.kraus() {
        let ax = a * x;
        let lambda = x.dotc(&ax);
        residual = residual.max((ax - x * lambda).norm());
        eigenvalues.push(lambda);
    }
    Ok(PureStateCheck {
        fixed: residual <= tol.residual,
        eigenvalues,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixedStateClass {
    /// `ρ = ∑_j c_j P_j / dim(S_j)` over the blocks of the given decomposition.
    Mixture { weights: Vec<f64>, residual: f64 },
    /// `ρ` is fixed but is not such a mixture over this particular
    /// decomposition (possible when irreducible blocks are equivalent).
    DegenerateFixedState {
        commutant_projection: ComplexMatrix,
        residual: f64,
    },
}

pub(crate) fn check_density_matrix(
    rho: &ComplexMatrix,
    dim: usize,
    tol: &Tolerances,
) -> Result<()> {
    ensure_dim(rho, dim)?;
    let deviation = hermitian_deviation(rho);
    if deviation > tol.hermitian.max(1e-10) {
        return Err(Error::NotADensityMatrix {
            reason: format!("not Hermitian (deviation {deviation:e})"),
        });
    }
    let trace = rho.trace();
    if (trace - r(1.0)).norm() > 1e-8 {
        return Err(Error::NotADensityMatrix {
            reason: format!("trace {trace} differs from 1"),
        });
    }
    let min = min_eigenvalue(rho);
    if min < -1e-10 {
        return Err(Error::NotADensityMatrix {
            reason: format!("negative eigenvalue {min:e}"),
        });
    }
    Ok(())
}

pub fn classify_fixed_state(
    ch: &KrausChannel,
    rho: &ComplexMatrix,
    decomposition: &IrisDecomposition,
    tol: &Tolerances,
) -> Result<FixedStateClass> {
    check_density_matrix(rho, ch.dim(), tol)?;
    if decomposition.ambient_dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            found: decomposition.ambient_dim(),
        });
    }
    let check = is_fixed(ch, rho, tol)?;
    if !check.fixed {
        return Err(Error::NotFixed {
            residual: check.fix_residual.max(check.commute_residual),
        });
    }

    // Block projectors are mutually orthogonal, so the least-squares weights
    // against P_j/dim(S_j) are just tr(P_j ρ).
    let mut weights = Vec::with_capacity(decomposition.blocks().len());
    let mut fit = ComplexMatrix::zeros(ch.dim(), ch.dim());
    for block in decomposition.blocks() {
        let p = block.projector();
        let w = (&p * rho).trace().re;
        fit += p.scale(w / block.dim() as f64);
        weights.push(w);
    }
    let residual = max_abs_diff(rho, &fit);
    if residual <= tol.residual && weights.iter().all(|&w| w >= -1e-10) {
        for w in &mut weights {
            *w = w.max(0.0);
        }
        Ok(FixedStateClass::Mixture { weights, residual })
    } else {
        let basis = commutant_basis(ch, tol);
        Ok(FixedStateClass::DegenerateFixedState {
            commutant_projection: basis.project(rho),
            residual,
        })
    }
}

/// `max_a max_i |A_i H_a − H_a A_i| / max|A_i|` over a commutant basis.
pub fn commutant_certificate_residual(ch: &KrausChannel, basis: &CommutantBasis) -> f64 {
    let mut worst = 0.0_f64;
    for h in basis.elements() {
        for a in ch.kraus() {
            let scale = max_abs(a).max(f64::MIN_POSITIVE);
            worst = worst.max(max_abs_diff(&(a * h), &(h * a)) / scale);
        }
    }
    worst
}
