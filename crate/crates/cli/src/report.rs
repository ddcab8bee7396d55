//! The JSON report written to standard output.
//!
//! Every field that a command does not produce is omitted. Reports parse back
//! into an equal [`AnalysisReport`].

use serde::{Deserialize, Serialize};
use unital_core::capacity::ChannelQuantity;
use unital_core::linalg::{ComplexMatrix, C64};
use unital_core::measurement::{MeasurementReport, StructuralDecomposition, ViolationWitness};
use unital_core::{
    DecompositionMatching, IrisDecomposition, QuantityKind, Subspace, Tolerances, ValidationReport,
};

use crate::document::{ChannelDocument, Entry, SCHEMA_VERSION};
use crate::error::CliError;

/// A general `rows × cols` matrix, row-major `[re, im]` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Entry>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: crate::document::flatten(m),
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.entries[i * self.cols + j];
            C64::new(re, im)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TolerancesDoc {
    pub hermitian: f64,
    pub nullspace: f64,
    pub eigencluster: f64,
    pub residual: f64,
    pub optimizer: f64,
}

impl From<&Tolerances> for TolerancesDoc {
    fn from(t: &Tolerances) -> Self {
        Self {
            hermitian: t.hermitian,
            nullspace: t.nullspace,
            eigencluster: t.eigencluster,
            residual: t.residual,
            optimizer: t.optimizer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub is_trace_preserving: bool,
    pub is_unital: bool,
    pub tp_residual: f64,
    pub unital_residual: f64,
}

impl From<&ValidationReport> for ValidationDoc {
    fn from(v: &ValidationReport) -> Self {
        Self {
            is_trace_preserving: v.is_trace_preserving,
            is_unital: v.is_unital,
            tp_residual: v.tp_residual,
            unital_residual: v.unital_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub seed: u64,
    pub dimensions: Vec<usize>,
    /// One `dim × dim(S_j)` basis per block, in block order.
    pub bases: Vec<MatrixDoc>,
    pub irreducibility_certificates: Vec<usize>,
}

impl DecompositionDoc {
    pub fn new(dec: &IrisDecomposition, seed: u64) -> Self {
        Self {
            seed,
            dimensions: dec.dimensions(),
            bases: dec
                .blocks()
                .iter()
                .map(|s| MatrixDoc::from_matrix(s.basis()))
                .collect(),
            irreducibility_certificates: dec.irreducibility_certificates().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedDoc {
    pub block: usize,
    pub channel: ChannelDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub left_blocks: Vec<usize>,
    pub right_blocks: Vec<usize>,
    pub dimensions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingDoc {
    pub right: DecompositionDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remix_seed: Option<u64>,
    pub components: Vec<ComponentDoc>,
    pub bijection: Vec<[usize; 2]>,
}

impl MatchingDoc {
    pub fn new(
        right: &IrisDecomposition,
        seed_b: u64,
        remix_seed: Option<u64>,
        m: &DecompositionMatching,
    ) -> Self {
        Self {
            right: DecompositionDoc::new(right, seed_b),
            remix_seed,
            components: m
                .components
                .iter()
                .map(|c| ComponentDoc {
                    left_blocks: c.left_blocks.clone(),
                    right_blocks: c.right_blocks.clone(),
                    dimensions: c.dimensions.clone(),
                })
                .collect(),
            bijection: m.bijection.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassificationDoc {
    Mixture {
        weights: Vec<f64>,
        residual: f64,
    },
    DegenerateFixedState {
        commutant_projection: MatrixDoc,
        residual: f64,
    },
    NotFixed {
        fix_residual: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedStatesDoc {
    pub commutant_basis: Vec<MatrixDoc>,
    /// `P_j / dim(S_j)` for each block of the decomposition.
    pub block_states: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub weight: f64,
    pub basis: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub state: MatrixDoc,
    pub signed_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub preserved: bool,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_subspace: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<WitnessDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveDoc {
    pub channels_commute: bool,
    pub commute_residual: f64,
    pub all_ranges_invariant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDoc {
    pub all_preserved: bool,
    pub elements: Vec<ElementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projective: Option<ProjectiveDoc>,
}

impl MeasurementDoc {
    /// `witnesses[k]` is the violation witness of element `k`, if any.
    pub fn new(report: &MeasurementReport, witnesses: &[Option<ViolationWitness>]) -> Self {
        let basis = |s: &Subspace| MatrixDoc::from_matrix(s.basis());
        Self {
            all_preserved: report.all_preserved,
            elements: report
                .elements
                .iter()
                .zip(witnesses)
                .map(|(e, w)| {
                    let (terms, witness_subspace) = match &e.structure {
                        StructuralDecomposition::Terms(ts) => (
                            Some(
                                ts.iter()
                                    .map(|t| TermDoc {
                                        weight: t.weight,
                                        basis: basis(&t.subspace),
                                    })
                                    .collect(),
                            ),
                            None,
                        ),
                        StructuralDecomposition::Failure { witness_subspace } => {
                            (None, Some(basis(witness_subspace)))
                        }
                    };
                    ElementDoc {
                        preserved: e.preserved,
                        residual: e.residual,
                        terms,
                        witness_subspace,
                        violation: w.as_ref().map(|w| WitnessDoc {
                            state: MatrixDoc::from_matrix(&w.state),
                            signed_gap: w.signed_gap,
                        }),
                    }
                })
                .collect(),
            projective: report.projective.map(|p| ProjectiveDoc {
                channels_commute: p.channels_commute,
                commute_residual: p.commute_residual,
                all_ranges_invariant: p.all_ranges_invariant,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub value: f64,
    pub method: String,
    pub restarts_used: usize,
    /// Block index for per-block values of a combination.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub achieved_argument: Option<MatrixDoc>,
}

impl QuantityDoc {
    pub fn new(q: &ChannelQuantity, block: Option<usize>) -> Self {
        Self {
            kind: q.kind.name().to_string(),
            alpha: match q.kind {
                QuantityKind::MinOutputRenyi { alpha } => Some(alpha),
                _ => None,
            },
            value: q.value,
            method: q.method.name().to_string(),
            restarts_used: q.restarts_used,
            block,
            achieved_argument: q.achieved_argument.as_ref().map(MatrixDoc::from_matrix),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationDoc>,
}

impl From<&CliError> for ErrorDoc {
    fn from(e: &CliError) -> Self {
        let mut doc = ErrorDoc {
            kind: e.kind().to_string(),
            message: e.to_string(),
            exit_code: e.exit_code(),
            path: None,
            line: None,
            column: None,
            validation: None,
        };
        match e {
            CliError::Parse {
                path, line, column, ..
            } => {
                doc.path = Some(path.clone());
                if *line > 0 {
                    doc.line = Some(*line);
                    doc.column = Some(*column);
                }
            }
            CliError::Validation(v) => doc.validation = Some(v.into()),
            _ => {}
        }
        doc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub command: String,
    pub tolerances: TolerancesDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutant_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted: Option<RestrictedDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<MatchingDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_states: Option<FixedStatesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantities: Option<Vec<QuantityDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDoc>,
}

impl AnalysisReport {
    pub fn new(command: &str, tol: &Tolerances) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            tolerances: tol.into(),
            validation: None,
            commutant_count: None,
            decomposition: None,
            restricted: None,
            matching: None,
            fixed_states: None,
            measurement: None,
            quantities: None,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("reports contain only finite numbers")
    }
}
