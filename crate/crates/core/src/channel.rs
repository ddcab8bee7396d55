//! Unital quantum channels in Kraus form.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, c, conj, ensure_dim, identity, kron, max_abs_diff, r, unitarity_deviation,
    unvectorize, vectorize, ComplexMatrix, C64,
};
use crate::random::{random_unitary, seeded_rng};
use crate::tolerance::Tolerances;

/// Residuals of the two completeness relations `∑ A†A = I` and `∑ AA† = I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub is_trace_preserving: bool,
    pub is_unital: bool,
    pub tp_residual: f64,
    pub unital_residual: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.is_trace_preserving && self.is_unital
    }
}

pub fn validate(ops: &[ComplexMatrix], tol: &Tolerances) -> Result<ValidationReport> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
    let dim = first.nrows();
    if dim == 0 {
        return Err(Error::InvalidParameter("zero-dimensional operator".into()));
    }
    for op in ops {
        ensure_dim(op, dim)?;
    }
    let mut tp = ComplexMatrix::zeros(dim, dim);
    let mut unital = ComplexMatrix::zeros(dim, dim);
    for a in ops {
        tp += a.adjoint() * a;
        unital += a * a.adjoint();
    }
    let id = identity(dim);
    let tp_residual = max_abs_diff(&tp, &id);
    let unital_residual = max_abs_diff(&unital, &id);
    Ok(ValidationReport {
        is_trace_preserving: tp_residual <= tol.residual,
        is_unital: unital_residual <= tol.residual,
        tp_residual,
        unital_residual,
    })
}

/// A unital trace-preserving channel `ρ ↦ ∑ A_i ρ A_i†`.
///
/// Two channels are equal when their superoperators agree; the Kraus list
/// itself is only one of many representations.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let report = validate(&kraus, tol)?;
        if !report.is_valid() {
            return Err(Error::NotUnitalChannel(report));
        }
        Ok(Self {
            dim: kraus[0].nrows(),
            kraus,
        })
    }

    pub(crate) fn new_unchecked(kraus: Vec<ComplexMatrix>) -> Self {
        Self {
            dim: kraus[0].nrows(),
            kraus,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn validation(&self, tol: &Tolerances) -> ValidationReport {
        validate(&self.kraus, tol).expect("channel holds well-formed Kraus operators")
    }

    pub fn apply(&self, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        ensure_dim(sigma, self.dim)?;
        Ok(self.apply_unchecked(sigma))
    }

    pub(crate) fn apply_unchecked(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.kraus {
            out += a * sigma * a.adjoint();
        }
        out
    }

    /// The Heisenberg-picture map `E ↦ ∑ A_i† E A_i`.
    pub fn apply_adjoint(&self, e: &ComplexMatrix) -> Result<ComplexMatrix> {
        ensure_dim(e, self.dim)?;
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.kraus {
            out += a.adjoint() * e * a;
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> KrausChannel {
        KrausChannel {
            dim: self.dim,
            kraus: self.kraus.iter().map(|a| a.adjoint()).collect(),
        }
    }

    /// `L` with `L vec(σ) = vec(φ(σ))`, column-stacking convention:
    /// `L = ∑ conj(A_i) ⊗ A_i`.
    pub fn superoperator_matrix(&self) -> ComplexMatrix {
        let n = self.dim * self.dim;
        let mut l = ComplexMatrix::zeros(n, n);
        for a in &self.kraus {
            l += kron(&conj(a), a);
        }
        l
    }

    /// Max-entry distance between superoperators.
    pub fn superoperator_distance(&self, other: &KrausChannel) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(max_abs_diff(
            &self.superoperator_matrix(),
            &other.superoperator_matrix(),
        ))
    }

    /// Kraus remixing `B_j = ∑_i u_{ij} A_i`, after zero-padding the Kraus
    /// list to the size of `u`.
    pub fn remix_kraus(&self, u: &ComplexMatrix, tol: &Tolerances) -> Result<KrausChannel> {
        let k = u.nrows();
        if !u.is_square() || k < self.kraus.len() {
            return Err(Error::DimensionMismatch {
                expected: self.kraus.len(),
                found: k,
            });
        }
        let deviation = unitarity_deviation(u);
        if deviation > tol.residual {
            return Err(Error::NotUnitary { deviation });
        }
        let kraus = (0..k)
            .map(|j| {
                let mut b = ComplexMatrix::zeros(self.dim, self.dim);
                for (i, a) in self.kraus.iter().enumerate() {
                    b += a * u[(i, j)];
                }
                b
            })
            .collect();
        Ok(KrausChannel {
            dim: self.dim,
            kraus,
        })
    }

    /// `a ⊕ b`, optionally conjugated as `U (A_i ⊕ B_i) U†`. The shorter Kraus
    /// list is zero-padded.
    pub fn direct_sum(
        a: &KrausChannel,
        b: &KrausChannel,
        conjugating_unitary: Option<&ComplexMatrix>,
        tol: &Tolerances,
    ) -> Result<KrausChannel> {
        let dim = a.dim + b.dim;
        if let Some(u) = conjugating_unitary {
            ensure_dim(u, dim)?;
            let deviation = unitarity_deviation(u);
            if deviation > tol.residual {
                return Err(Error::NotUnitary { deviation });
            }
        }
        let count = a.kraus.len().max(b.kraus.len());
        let kraus = (0..count)
            .map(|i| {
                let ai = a
                    .kraus
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| ComplexMatrix::zeros(a.dim, a.dim));
                let bi = b
                    .kraus
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| ComplexMatrix::zeros(b.dim, b.dim));
                let block = block_diag(&ai, &bi);
                match conjugating_unitary {
                    Some(u) => u * block * u.adjoint(),
                    None => block,
                }
            })
            .collect();
        Ok(KrausChannel { dim, kraus })
    }

    /// `U A_i U†` for every Kraus operator.
    pub fn conjugated(&self, u: &ComplexMatrix, tol: &Tolerances) -> Result<KrausChannel> {
        ensure_dim(u, self.dim)?;
        let deviation = unitarity_deviation(u);
        if deviation > tol.residual {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(KrausChannel {
            dim: self.dim,
            kraus: self.kraus.iter().map(|a| u * a * u.adjoint()).collect(),
        })
    }
}

/// Applies a superoperator matrix to an operator.
pub fn apply_superoperator(l: &ComplexMatrix, sigma: &ComplexMatrix) -> ComplexMatrix {
    let dim = sigma.nrows();
    unvectorize(&(l * vectorize(sigma)), dim)
}

#[derive(Debug, Clone, PartialEq)]
pub enum StandardChannel {
    Identity,
    /// `ρ ↦ (1−p)ρ + p·tr(ρ)·I/d`, `0 < p ≤ 1`.
    Depolarizing(f64),
    /// Dephasing in the computational basis via the clock operators
    /// `Z^b / √d`, `b = 0..d`. For `d = 2` this is `{√½·I, √½·Z}`.
    Dephasing,
    Unitary(ComplexMatrix),
    /// Equal-weight mixture of `n` Haar-random unitaries.
    RandomUnital {
        n_unitaries: usize,
        seed: u64,
    },
}

/// Generalized Pauli shift operator `X|j⟩ = |j+1 mod d⟩`.
pub fn shift_operator(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(
        dim,
        dim,
        |i, j| {
            if i == (j + 1) % dim {
                r(1.0)
            } else {
                r(0.0)
            }
        },
    )
}

/// Generalized Pauli clock operator `Z|j⟩ = ω^j |j⟩`.
pub fn clock_operator(dim: usize) -> ComplexMatrix {
    let omega = 2.0 * std::f64::consts::PI / dim as f64;
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::from_polar(1.0, omega * i as f64)
        } else {
            r(0.0)
        }
    })
}

pub fn pauli_x() -> ComplexMatrix {
    shift_operator(2)
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[r(0.0), c(0.0, -1.0), c(0.0, 1.0), r(0.0)])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[r(1.0), r(0.0), r(0.0), r(-1.0)])
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_row_slice(2, 2, &[r(s), r(s), r(s), r(-s)])
}

pub fn standard_channel(
    kind: &StandardChannel,
    dim: usize,
    tol: &Tolerances,
) -> Result<KrausChannel> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let kraus = match kind {
        StandardChannel::Identity => vec![identity(dim)],
        StandardChannel::Depolarizing(p) => {
            let p = *p;
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "depolarizing probability must lie in (0, 1], got {p}"
                )));
            }
            // The d² Weyl operators average to the completely depolarizing
            // map: (1/d²)∑ W ρ W† = tr(ρ) I/d.
            let d2 = (dim * dim) as f64;
            let shift = shift_operator(dim);
            let clock = clock_operator(dim);
            let mut ops = Vec::with_capacity(dim * dim);
            let mut shift_pow = identity(dim);
            for a in 0..dim {
                let mut clock_pow = identity(dim);
                for b in 0..dim {
                    let weight = if a == 0 && b == 0 {
                        (1.0 - p + p / d2).sqrt()
                    } else {
                        (p / d2).sqrt()
                    };
                    ops.push((&shift_pow * &clock_pow).scale(weight));
                    clock_pow = &clock_pow * &clock;
                }
                shift_pow = &shift_pow * &shift;
            }
            ops
        }
        StandardChannel::Dephasing => {
            let clock = clock_operator(dim);
            let w = 1.0 / (dim as f64).sqrt();
            let mut ops = Vec::with_capacity(dim);
            let mut pow = identity(dim);
            for _ in 0..dim {
                ops.push(pow.scale(w));
                pow = &pow * &clock;
            }
            ops
        }
        StandardChannel::Unitary(u) => {
            ensure_dim(u, dim)?;
            let deviation = unitarity_deviation(u);
            if deviation > tol.residual {
                return Err(Error::NotUnitary { deviation });
            }
            vec![u.clone()]
        }
        StandardChannel::RandomUnital { n_unitaries, seed } => {
            if *n_unitaries == 0 {
                return Err(Error::InvalidParameter("need at least one unitary".into()));
            }
            let mut rng = seeded_rng(*seed);
            random_unital_kraus(dim, *n_unitaries, &mut rng)
        }
    };
    KrausChannel::new(kraus, tol)
}

/// Kraus operators `U_k/√n` of an equal-weight mixture of Haar unitaries.
pub fn random_unital_kraus<R: Rng + ?Sized>(
    dim: usize,
    n_unitaries: usize,
    rng: &mut R,
) -> Vec<ComplexMatrix> {
    let w = 1.0 / (n_unitaries as f64).sqrt();
    (0..n_unitaries)
        .map(|_| random_unitary(dim, rng).scale(w))
        .collect()
}

/// Random unital channel from an existing generator, for test fixtures.
pub fn random_unital_channel<R: Rng + ?Sized>(
    dim: usize,
    n_unitaries: usize,
    rng: &mut R,
) -> KrausChannel {
    KrausChannel::new_unchecked(random_unital_kraus(dim, n_unitaries, rng))
}
