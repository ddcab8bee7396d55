//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here is a thin layer over `nalgebra`: Hermitian
//! eigendecomposition with ascending eigenvalues, SVD-based null spaces,
//! orthonormal complements and eigenvalue clustering. Norms are the
//! max-absolute-entry norm unless a function says otherwise.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Orthonormality threshold for caller-supplied bases.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| r(entries[i * cols + j]))
}

/// Max absolute entry. Zero for empty matrices.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(m, &m.adjoint())
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.is_square() {
        Ok(m.nrows())
    } else {
        Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        })
    }
}

pub fn ensure_dim(m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.nrows(),
        });
    }
    if m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.ncols(),
        });
    }
    Ok(())
}

/// `tr(a† b)`.
pub fn trace_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Column-stacking vectorization. `nalgebra` stores column-major, so this is
/// a plain copy of the storage.
pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &ComplexVector, dim: usize) -> ComplexMatrix {
    assert_eq!(v.len(), dim * dim);
    ComplexMatrix::from_column_slice(dim, dim, v.as_slice())
}

pub fn projector(basis: &ComplexMatrix) -> ComplexMatrix {
    basis * basis.adjoint()
}

/// Max deviation of `basis† basis` from the identity.
pub fn orthonormality_deviation(basis: &ComplexMatrix) -> f64 {
    let k = basis.ncols();
    if k == 0 {
        return 0.0;
    }
    max_abs_diff(&(basis.adjoint() * basis), &identity(k))
}

pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` pairs with `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.nrows();
        let mut out = zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            out += (v * v.adjoint()).scale(lambda);
        }
        out
    }

    /// Columns for the index range, as an owned matrix.
    pub fn columns(&self, range: Range<usize>) -> ComplexMatrix {
        self.vectors.columns(range.start, range.len()).into_owned()
    }

    /// Applies `f` to the spectrum: `∑ f(λ_k) v_k v_k†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).scale_mut(w);
        }
        let out = scaled * self.vectors.adjoint();
        debug_assert_eq!(out.nrows(), n);
        out
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    ensure_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > tol.hermitian * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(hermitian_eig_unchecked(&hermitian_part(m)))
}

/// Same as [`hermitian_eig`] but symmetrizes instead of checking.
pub fn hermitian_eig_unchecked(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: zeros(0, 0),
        };
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eig_unchecked(m)
        .values
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Singular values (descending) and the full right-singular basis.
fn svd_with_full_v(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (rows, cols) = m.shape();
    // Tall systems are compressed to their square R factor; same V, same σ.
    let square = if rows > cols {
        m.clone().qr().r()
    } else if rows < cols {
        let mut padded = zeros(cols, cols);
        padded.rows_mut(0, rows).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&k| svd.singular_values[k]).collect();
    let v = ComplexMatrix::from_fn(cols, cols, |i, j| v_t[(order[j], i)].conj());
    (values, v)
}

/// Largest singular value below which a matrix is rounding noise.
pub const ZERO_MATRIX_FLOOR: f64 = 1e-12;

/// Orthonormal basis of `{x : M x = 0}`, as columns.
///
/// A singular value counts as zero when it is at most `tol.nullspace` times
/// the largest one. A matrix whose largest singular value is below
/// [`ZERO_MATRIX_FLOOR`] is treated as zero and has a full kernel.
pub fn null_space(m: &ComplexMatrix, tol: &Tolerances) -> ComplexMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return zeros(0, 0);
    }
    let (sigma, v) = svd_with_full_v(m);
    let largest = sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.nullspace * largest;
    let kernel: Vec<usize> = (0..cols)
        .filter(|&k| largest <= ZERO_MATRIX_FLOOR || sigma[k] <= cutoff)
        .collect();
    ComplexMatrix::from_fn(cols, kernel.len(), |i, j| v[(i, kernel[j])])
}

/// Numerical rank under the same cutoff as [`null_space`].
pub fn rank(m: &ComplexMatrix, tol: &Tolerances) -> usize {
    m.ncols() - null_space(m, tol).ncols()
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` in
/// `C^ambient_dim`.
pub fn orthonormal_complement(basis: &ComplexMatrix, ambient_dim: usize) -> Result<ComplexMatrix> {
    if basis.nrows() != ambient_dim && basis.ncols() > 0 {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: basis.nrows(),
        });
    }
    if basis.ncols() > ambient_dim {
        return Err(Error::NotOrthonormal {
            deviation: f64::INFINITY,
        });
    }
    let deviation = orthonormality_deviation(basis);
    if deviation > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    let k = basis.ncols();
    if k == 0 {
        return Ok(identity(ambient_dim));
    }
    let complement_projector = identity(ambient_dim) - projector(basis);
    let eig = hermitian_eig_unchecked(&complement_projector);
    // Eigenvalues are 0 (k times) then 1 (ambient_dim - k times).
    Ok(eig.columns(k..ambient_dim))
}

/// Orthonormal basis for the column span of `m` (rank decided as in
/// [`null_space`]).
pub fn range_basis(m: &ComplexMatrix, tol: &Tolerances) -> ComplexMatrix {
    if m.is_empty() {
        return zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let largest = svd.singular_values.max();
    if largest <= ZERO_MATRIX_FLOOR {
        return zeros(m.nrows(), 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > tol.nullspace * largest)
        .collect();
    ComplexMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Single-linkage grouping of an ascending list: consecutive values closer
/// than `width` share a cluster.
pub fn cluster_sorted(values: &[f64], width: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    if values.is_empty() {
        return clusters;
    }
    let mut start = 0;
    for k in 1..values.len() {
        if values[k] - values[k - 1] > width {
            clusters.push(start..k);
            start = k;
        }
    }
    clusters.push(start..values.len());
    clusters
}

/// Block-diagonal embedding `a ⊕ b`.
pub fn block_diag(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn conj(a: &ComplexMatrix) -> ComplexMatrix {
    a.map(|z| z.conj())
}

pub fn is_psd(m: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    let eig = hermitian_eig(m, tol)?;
    Ok(eig.values.first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_unitary, seeded_rng};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&identity(2), &tol()).unwrap();
        assert_eq!(eig.values.len(), 2);
        assert!((eig.values[0] - 1.0).abs() < 1e-14 && (eig.values[1] - 1.0).abs() < 1e-14);
        assert!(orthonormality_deviation(&eig.vectors) < 1e-12);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let eig = hermitian_eig(&x, &tol()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (1, -1)/√2 for -1 up to phase.
        let v0 = eig.vectors.column(0);
        assert!((v0[0].norm() - s).abs() < 1e-12);
        assert!(((v0[0] + v0[1]).norm()) < 1e-12);
        let v1 = eig.vectors.column(1);
        assert!(((v1[0] - v1[1]).norm()) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            hermitian_eig(&m, &tol()),
            Err(Error::NotHermitian { .. })
        ));
        let rect = zeros(2, 3);
        assert!(matches!(
            hermitian_eig(&rect, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = seeded_rng(11);
        for _ in 0..20 {
            let h = random_hermitian(5, &mut rng);
            let eig = hermitian_eig(&h, &tol()).unwrap();
            assert!(max_abs_diff(&eig.reconstruct(), &h) <= 1e-10 * max_abs(&h).max(1.0));
            assert!(orthonormality_deviation(&eig.vectors) < 1e-12);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            for k in 0..5 {
                let v = eig.vectors.column(k);
                let resid = &h * v - v * r(eig.values[k]);
                assert!(resid.iter().all(|z| z.norm() <= 1e-10 * max_abs(&h)));
            }
        }
    }

    #[test]
    fn null_space_examples() {
        let ns = null_space(&zeros(3, 3), &tol());
        assert_eq!(ns.ncols(), 3);
        assert!(orthonormality_deviation(&ns) < 1e-12);

        assert_eq!(null_space(&identity(2), &tol()).ncols(), 0);

        let mut e1e1 = zeros(3, 3);
        e1e1[(0, 0)] = r(1.0);
        let ns = null_space(&e1e1, &tol());
        assert_eq!(ns.ncols(), 2);
        for j in 0..2 {
            assert!(ns[(0, j)].norm() < 1e-12);
        }
        assert!(orthonormality_deviation(&ns) < 1e-12);
    }

    #[test]
    fn null_space_of_wide_and_tall_systems() {
        let mut rng = seeded_rng(3);
        let u = random_unitary(4, &mut rng);
        // Rank-2 wide matrix: 2 rows of a unitary.
        let wide = u.rows(0, 2).into_owned();
        let ns = null_space(&wide, &tol());
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&wide * &ns)) < 1e-12);
        // Tall: stack twice.
        let mut tall = zeros(4, 4);
        tall.rows_mut(0, 2).copy_from(&wide);
        tall.rows_mut(2, 2).copy_from(&wide.scale(2.0));
        let mut taller = zeros(8, 4);
        taller.rows_mut(0, 4).copy_from(&tall);
        let ns = null_space(&taller, &tol());
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&taller * &ns)) < 1e-12);
    }

    #[test]
    fn complement_examples() {
        let mut e1 = zeros(2, 1);
        e1[(0, 0)] = r(1.0);
        let comp = orthonormal_complement(&e1, 2).unwrap();
        assert_eq!(comp.ncols(), 1);
        assert!((comp[(1, 0)].norm() - 1.0).abs() < 1e-12);

        let full = identity(3);
        assert_eq!(orthonormal_complement(&full, 3).unwrap().ncols(), 0);

        // Gram–Schmidt oracle: (e1 - e2)/√2 is the unique complement ray.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = from_real_rows(2, 1, &[s, s]);
        let comp = orthonormal_complement(&plus, 2).unwrap();
        let minus = from_real_rows(2, 1, &[s, -s]);
        let overlap = (minus.adjoint() * &comp)[(0, 0)].norm();
        assert!((overlap - 1.0).abs() < 1e-12);

        let bad = from_real_rows(2, 1, &[1.0, 1.0]);
        assert!(matches!(
            orthonormal_complement(&bad, 2),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn clustering_is_single_linkage() {
        let v = [0.0, 0.5e-7, 0.9e-7, 1.0, 1.0, 2.0];
        let c = cluster_sorted(&v, 1e-7);
        assert_eq!(c, vec![0..3, 3..5, 5..6]);
        assert!(cluster_sorted(&[], 1.0).is_empty());
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| r((i + 2 * j) as f64));
        let v = vectorize(&m);
        assert_eq!(v[1], r(1.0));
        assert_eq!(v[2], r(2.0));
        assert_eq!(unvectorize(&v, 2), m);
    }

    #[test]
    fn range_of_random_projectors() {
        let mut rng = seeded_rng(41);
        for rank in 1..6 {
            let u = random_unitary(6, &mut rng);
            let b = u.columns(0, rank).into_owned();
            let p = &b * b.adjoint();
            let range = range_basis(&p, &tol());
            assert_eq!(range.ncols(), rank);
            assert!(max_abs_diff(&(&range * range.adjoint()), &p) < 1e-12);
        }
    }
}
