//! Preservation of measurement statistics under a unital channel.
//!
//! `tr(Eρ) = tr(E φ(ρ))` for every state exactly when `φ†(E) = E`, which in
//! turn holds exactly when every spectral projector of `E` projects onto an
//! invariant subspace of `φ`.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::iris::{is_invariant_subspace, Subspace};
use crate::linalg::{
    cluster_sorted, conj, ensure_dim, hermitian_deviation, hermitian_eig, hermitian_eig_unchecked,
    identity, kron, max_abs_diff, ComplexMatrix,
};
use crate::tolerance::Tolerances;

const ELEMENT_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-9;

/// Finite POVM: PSD elements summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidMeasurement("no elements".into()))?
            .nrows();
        let mut total = ComplexMatrix::zeros(dim, dim);
        for e in &elements {
            ensure_dim(e, dim)?;
            check_psd(e, tol).map_err(|err| Error::InvalidMeasurement(err.to_string()))?;
            total += e;
        }
        let deviation = max_abs_diff(&total, &identity(dim));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "elements sum to identity only within {deviation:e}"
            )));
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }
}

/// Complete set of mutually orthogonal projectors.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    dim: usize,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = projectors
            .first()
            .ok_or_else(|| Error::InvalidMeasurement("no projectors".into()))?
            .nrows();
        let mut total = ComplexMatrix::zeros(dim, dim);
        for (k, p) in projectors.iter().enumerate() {
            ensure_dim(p, dim)?;
            let deviation = projector_deviation(p);
            if deviation > ELEMENT_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "element {k} is not an orthogonal projector (deviation {deviation:e})"
                )));
            }
            for (l, q) in projectors.iter().enumerate().skip(k + 1) {
                let overlap = max_abs_diff(&(p * q), &ComplexMatrix::zeros(dim, dim));
                if overlap > ELEMENT_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "projectors {k} and {l} are not orthogonal ({overlap:e})"
                    )));
                }
            }
            total += p;
        }
        let deviation = max_abs_diff(&total, &identity(dim));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "projectors sum to identity only within {deviation:e}"
            )));
        }
        Ok(Self { dim, projectors })
    }

    /// Projectors onto the given pairwise orthogonal subspaces, which must
    /// cover the space.
    pub fn from_subspaces(subspaces: &[Subspace]) -> Result<Self> {
        Self::new(subspaces.iter().map(Subspace::projector).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn to_povm(&self) -> Povm {
        Povm {
            dim: self.dim,
            elements: self.projectors.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Measurement {
    Povm(Povm),
    Projective(ProjectiveMeasurement),
}

impl Measurement {
    pub fn dim(&self) -> usize {
        match self {
            Measurement::Povm(m) => m.dim(),
            Measurement::Projective(m) => m.dim(),
        }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        match self {
            Measurement::Povm(m) => m.elements(),
            Measurement::Projective(m) => m.projectors(),
        }
    }
}

fn projector_deviation(p: &ComplexMatrix) -> f64 {
    hermitian_deviation(p).max(max_abs_diff(&(p * p), p))
}

fn check_psd(e: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let eig = hermitian_eig(e, tol).map_err(|_| Error::NotPsd {
        min_eigenvalue: f64::NAN,
    })?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -ELEMENT_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// `ρ ↦ ∑_k Π_k ρ Π_k`.
pub fn projective_channel(m: &ProjectiveMeasurement, tol: &Tolerances) -> Result<KrausChannel> {
    KrausChannel::new(m.projectors().to_vec(), tol)
        .map_err(|e| Error::InvalidMeasurement(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlagResidual {
    pub holds: bool,
    pub residual: f64,
}

/// Tests `Π φ(ρ) Π = φ(Π ρ Π)` for all `ρ` as the superoperator identity
/// `L_Π L_φ = L_φ L_Π`.
pub fn projection_intertwines(
    ch: &KrausChannel,
    pi: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<FlagResidual> {
    ensure_dim(pi, ch.dim())?;
    let deviation = projector_deviation(pi);
    if deviation > ELEMENT_TOL {
        return Err(Error::NotAProjector { deviation });
    }
    let l_pi = kron(&conj(pi), pi);
    let l_phi = ch.superoperator_matrix();
    let residual = max_abs_diff(&(&l_pi * &l_phi), &(&l_phi * &l_pi));
    Ok(FlagResidual {
        holds: residual <= tol.residual,
        residual,
    })
}

pub fn channels_commute(
    a: &KrausChannel,
    b: &KrausChannel,
    tol: &Tolerances,
) -> Result<FlagResidual> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let la = a.superoperator_matrix();
    let lb = b.superoperator_matrix();
    let residual = max_abs_diff(&(&la * &lb), &(&lb * &la));
    Ok(FlagResidual {
        holds: residual <= tol.residual,
        residual,
    })
}

/// `max |φ†(E) − E| ≤ tol.residual`.
pub fn statistics_preserved(
    ch: &KrausChannel,
    e: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<FlagResidual> {
    ensure_dim(e, ch.dim())?;
    check_psd(e, tol)?;
    let residual = max_abs_diff(&ch.apply_adjoint(e)?, e);
    Ok(FlagResidual {
        holds: residual <= tol.residual,
        residual,
    })
}

#[derive(Debug, Clone)]
pub struct StructuralTerm {
    /// Eigenvalue shared by the cluster (its mean).
    pub weight: f64,
    pub subspace: Subspace,
}

#[derive(Debug, Clone)]
pub enum StructuralDecomposition {
    /// `E = ∑ weight_j P_{T_j}` with every `T_j` invariant; zero-weight
    /// eigenspaces are omitted.
    Terms(Vec<StructuralTerm>),
    /// The first eigenspace of `E`, from the top of the spectrum down, that
    /// is not invariant.
    Failure { witness_subspace: Subspace },
}

impl StructuralDecomposition {
    pub fn is_terms(&self) -> bool {
        matches!(self, StructuralDecomposition::Terms(_))
    }
}

pub fn povm_structural_decomposition(
    ch: &KrausChannel,
    e: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<StructuralDecomposition> {
    let preserved = statistics_preserved(ch, e, tol)?;
    let eig = hermitian_eig_unchecked(e);
    let clusters = cluster_sorted(&eig.values, tol.eigencluster);

    let mut terms = Vec::with_capacity(clusters.len());
    for cluster in clusters.into_iter().rev() {
        let weight = eig.values[cluster.clone()].iter().sum::<f64>() / cluster.len() as f64;
        let subspace = Subspace::new(eig.columns(cluster))?;
        let invariant = is_invariant_subspace(ch, &subspace, tol)?.invariant;
        if !invariant {
            if preserved.holds {
                return Err(Error::ToleranceFailure(format!(
                    "preserved element has a non-invariant eigenspace (eigenvalue {weight})"
                )));
            }
            return Ok(StructuralDecomposition::Failure {
                witness_subspace: subspace,
            });
        }
        if weight.abs() > tol.eigencluster {
            terms.push(StructuralTerm { weight, subspace });
        }
    }
    if !preserved.holds {
        return Err(Error::ToleranceFailure(format!(
            "every eigenspace is invariant but φ†(E) differs from E by {:e}",
            preserved.residual
        )));
    }
    Ok(StructuralDecomposition::Terms(terms))
}

#[derive(Debug, Clone)]
pub struct ViolationWitness {
    /// Rank-one density matrix.
    pub state: ComplexMatrix,
    /// `tr(Eρ) − tr(E φ(ρ))`, signed.
    pub signed_gap: f64,
}

impl ViolationWitness {
    pub fn gap(&self) -> f64 {
        self.signed_gap.abs()
    }
}

/// State maximizing `|tr(Eρ) − tr(E φ(ρ))|`: the top eigenvector (by
/// magnitude) of `E − φ†(E)`.
pub fn violation_witness(
    ch: &KrausChannel,
    e: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ViolationWitness> {
    let preserved = statistics_preserved(ch, e, tol)?;
    if preserved.holds {
        return Err(Error::NoViolation);
    }
    let diff = e - ch.apply_adjoint(e)?;
    let eig = hermitian_eig_unchecked(&diff);
    let n = eig.values.len();
    let k = if eig.values[0].abs() > eig.values[n - 1].abs() {
        0
    } else {
        n - 1
    };
    let v = eig.vectors.column(k);
    Ok(ViolationWitness {
        state: v * v.adjoint(),
        signed_gap: eig.values[k],
    })
}

#[derive(Debug, Clone)]
pub struct ElementReport {
    pub preserved: bool,
    pub residual: f64,
    pub structure: StructuralDecomposition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveSummary {
    pub channels_commute: bool,
    pub commute_residual: f64,
    pub all_ranges_invariant: bool,
}

#[derive(Debug, Clone)]
pub struct MeasurementReport {
    pub elements: Vec<ElementReport>,
    pub all_preserved: bool,
    pub projective: Option<ProjectiveSummary>,
}

/// Per-element preservation report. For projective measurements the report
/// also carries whether the measurement channel commutes with `ch` and whether
/// every projector range is invariant; invariance and preservation must agree,
/// and invariance must imply commuting, otherwise `ToleranceFailure`.
pub fn measurement_preserved(
    ch: &KrausChannel,
    m: &Measurement,
    tol: &Tolerances,
) -> Result<MeasurementReport> {
    if m.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            found: m.dim(),
        });
    }
    let elements = m
        .elements()
        .iter()
        .map(|e| {
            let flag = statistics_preserved(ch, e, tol)?;
            let structure = povm_structural_decomposition(ch, e, tol)?;
            Ok(ElementReport {
                preserved: flag.holds,
                residual: flag.residual,
                structure,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_preserved = elements.iter().all(|r| r.preserved);

    let projective = match m {
        Measurement::Povm(_) => None,
        Measurement::Projective(pm) => {
            let commute = channels_commute(&projective_channel(pm, tol)?, ch, tol)?;
            let mut all_ranges_invariant = true;
            for p in pm.projectors() {
                // A zero projector has an empty range, which is trivially invariant.
                let range = crate::linalg::range_basis(p, tol);
                if range.ncols() > 0 {
                    let s = Subspace::new(range)?;
                    all_ranges_invariant &= is_invariant_subspace(ch, &s, tol)?.invariant;
                }
            }
            // Invariant ranges imply commuting channels, but not conversely:
            // depolarizing commutes with every dephasing.
            if (all_ranges_invariant && !commute.holds) || all_ranges_invariant != all_preserved {
                return Err(Error::ToleranceFailure(format!(
                    "projective criteria disagree: commute={}, ranges invariant={}, \
                     statistics preserved={}",
                    commute.holds, all_ranges_invariant, all_preserved
                )));
            }
            Some(ProjectiveSummary {
                channels_commute: commute.holds,
                commute_residual: commute.residual,
                all_ranges_invariant,
            })
        }
    };

    Ok(MeasurementReport {
        elements,
        all_preserved,
        projective,
    })
}
