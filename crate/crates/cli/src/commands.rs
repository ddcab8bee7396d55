use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use unital_core::capacity::{
    coherent_information, ent_assisted_capacity, evaluate_over_blocks, min_output_renyi,
    reduce_over_blocks, ChannelQuantity, Method, QuantityOptions, DEFAULT_RESTARTS,
};
use unital_core::construct::{block_sum_of, irreducible_block};
use unital_core::fixed::FixedStateClass;
use unital_core::random::{random_unitary, seeded_rng};
use unital_core::{
    classify_fixed_state, commutant_basis, iris_decompose, is_fixed, match_decompositions,
    measurement_preserved, restrict, standard_channel, validate, violation_witness, KrausChannel,
    QuantityKind, StandardChannel, Tolerances,
};

use crate::document::{parse_channel, parse_measurement, parse_state, ChannelDocument, Metadata};
use crate::error::{CliError, EXIT_OK, EXIT_VALIDATION};
use crate::report::{
    AnalysisReport, ClassificationDoc, DecompositionDoc, ErrorDoc, FixedStatesDoc, MatchingDoc,
    MatrixDoc, MeasurementDoc, QuantityDoc, RestrictedDoc,
};

#[derive(Debug, Parser)]
#[command(
    name = "unital",
    version,
    about = "Analyse unital quantum channels given as Kraus operators"
)]
pub struct Cli {
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Residual tolerance for fixed-point, invariance and equality checks.
    #[arg(long, global = true, default_value_t = Tolerances::default().residual)]
    pub tol_residual: f64,
    /// Width used to group numerically equal eigenvalues.
    #[arg(long, global = true, default_value_t = Tolerances::default().eigencluster)]
    pub tol_eigencluster: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a channel document is unital and trace preserving.
    Validate { channel: PathBuf },
    /// Split the space into irreducible invariant subspaces.
    Decompose {
        channel: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Restrict the channel to one block of its decomposition.
    Restrict {
        channel: PathBuf,
        #[arg(long)]
        block: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decompose twice and match the two decompositions.
    Match {
        channel: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        seed_b: u64,
        /// Remix the Kraus operators with a seeded random unitary before the
        /// second decomposition.
        #[arg(long)]
        remix_seed: Option<u64>,
    },
    /// Commutant basis and block states; optionally classify a state.
    FixedStates {
        channel: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Check which measurement outcomes keep their statistics.
    CheckMeasurement {
        channel: PathBuf,
        measurement: PathBuf,
    },
    /// Entropic quantities and their block-wise combination.
    Capacity {
        channel: PathBuf,
        #[arg(long, value_enum)]
        quantity: QuantityArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// Quantity combined over blocks by `--quantity combine`.
        #[arg(long, value_enum, default_value_t = CombineArg::Ce)]
        of: CombineArg,
        /// Externally computed per-block values, comma separated, in block
        /// order. Required for `--of cc`.
        #[arg(long, value_delimiter = ',')]
        block_values: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        decompose_seed: u64,
    },
    /// Write a standard channel as a channel document.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Depolarizing strength.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Block dimensions for `block-sum`, comma separated.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Unitaries mixed by `random-unital`.
        #[arg(long, default_value_t = 3)]
        unitaries: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Smin,
    Ce,
    Coh,
    Combine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CombineArg {
    Smin,
    Ce,
    Coh,
    Cc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Identity,
    Depolarizing,
    Dephasing,
    Unitary,
    RandomUnital,
    BlockSum,
}

pub(crate) struct Outcome {
    pub stdout: String,
    pub summary: String,
    pub exit_code: i32,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Decompose { .. } => "decompose",
            Command::Restrict { .. } => "restrict",
            Command::Match { .. } => "match",
            Command::FixedStates { .. } => "fixed-states",
            Command::CheckMeasurement { .. } => "check-measurement",
            Command::Capacity { .. } => "capacity",
            Command::Gen { .. } => "gen",
        }
    }
}

pub(crate) fn execute(cli: &Cli) -> Outcome {
    let tol = Tolerances::default()
        .with_residual(cli.tolerances.tol_residual)
        .with_eigencluster(cli.tolerances.tol_eigencluster);
    let mut report = AnalysisReport::new(cli.command.name(), &tol);
    if !tol.is_valid() {
        return failure(
            report,
            CliError::Usage("tolerances must be positive and finite".into()),
        );
    }
    if let Command::Gen {
        kind,
        dim,
        p,
        dims,
        seed,
        unitaries,
    } = &cli.command
    {
        return match generate(*kind, *dim, *p, dims, *seed, *unitaries, &tol) {
            Ok(doc) => Outcome {
                stdout: crate::json::to_string(&doc)
                    .expect("documents contain only finite numbers"),
                summary: format!(
                    "generated {} channel on C^{} with {} Kraus operators",
                    kind_name(*kind),
                    doc.dim,
                    doc.kraus.len()
                ),
                exit_code: EXIT_OK,
            },
            Err(e) => failure(report, e),
        };
    }
    match run(&cli.command, &tol, &mut report) {
        Ok((summary, exit_code)) => Outcome {
            stdout: report.to_json(),
            summary,
            exit_code,
        },
        Err(e) => failure(report, e),
    }
}

fn failure(mut report: AnalysisReport, e: CliError) -> Outcome {
    let doc = ErrorDoc::from(&e);
    if let CliError::Validation(v) = &e {
        report.validation = Some(v.into());
    }
    let exit_code = doc.exit_code;
    report.error = Some(doc);
    Outcome {
        stdout: report.to_json(),
        summary: format!("error: {e}"),
        exit_code,
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_channel(
    path: &Path,
    tol: &Tolerances,
    report: &mut AnalysisReport,
) -> Result<KrausChannel, CliError> {
    let ch = parse_channel(&read(path)?, tol)?;
    report.validation = Some((&ch.validation(tol)).into());
    Ok(ch)
}

fn run(
    command: &Command,
    tol: &Tolerances,
    report: &mut AnalysisReport,
) -> Result<(String, i32), CliError> {
    match command {
        Command::Validate { channel } => {
            let doc: ChannelDocument = {
                let bytes = read(channel)?;
                let de = &mut serde_json::Deserializer::from_slice(&bytes);
                serde_path_to_error::deserialize(de).map_err(|e| {
                    let path = e.path().to_string();
                    let inner = e.into_inner();
                    CliError::Parse {
                        path,
                        line: inner.line(),
                        column: inner.column(),
                        message: inner.to_string(),
                    }
                })?
            };
            let v = validate(&doc.kraus_matrices()?, tol)?;
            report.validation = Some((&v).into());
            let summary = format!(
                "trace preserving: {} (residual {:.3e}); unital: {} (residual {:.3e})",
                v.is_trace_preserving, v.tp_residual, v.is_unital, v.unital_residual
            );
            if v.is_valid() {
                Ok((summary, EXIT_OK))
            } else {
                report.error = Some(ErrorDoc::from(&CliError::Validation(v)));
                Ok((summary, EXIT_VALIDATION))
            }
        }
        Command::Decompose { channel, seed } => {
            let ch = load_channel(channel, tol, report)?;
            report.commutant_count = Some(commutant_basis(&ch, tol).count());
            let dec = iris_decompose(&ch, tol, *seed)?;
            report.decomposition = Some(DecompositionDoc::new(&dec, *seed));
            Ok((format!("block dimensions {:?}", dec.dimensions()), EXIT_OK))
        }
        Command::Restrict {
            channel,
            block,
            seed,
        } => {
            let ch = load_channel(channel, tol, report)?;
            let dec = iris_decompose(&ch, tol, *seed)?;
            report.decomposition = Some(DecompositionDoc::new(&dec, *seed));
            let s = dec.blocks().get(*block).ok_or_else(|| {
                CliError::Usage(format!(
                    "block index {block} out of range ({} blocks)",
                    dec.blocks().len()
                ))
            })?;
            let restricted = restrict(&ch, s, tol)?;
            report.restricted = Some(RestrictedDoc {
                block: *block,
                channel: ChannelDocument::from_channel(
                    &restricted,
                    Some(Metadata {
                        name: None,
                        seed: Some(*seed),
                        construction: Some(format!("restriction to block {block}")),
                    }),
                ),
            });
            Ok((
                format!("restricted to block {block} of dimension {}", s.dim()),
                EXIT_OK,
            ))
        }
        Command::Match {
            channel,
            seed,
            seed_b,
            remix_seed,
        } => {
            let ch = load_channel(channel, tol, report)?;
            let left = iris_decompose(&ch, tol, *seed)?;
            let other = match remix_seed {
                Some(rs) => {
                    let mut rng = seeded_rng(*rs);
                    let u = random_unitary(ch.kraus_count(), &mut rng);
                    ch.remix_kraus(&u, tol)?
                }
                None => ch.clone(),
            };
            let right = iris_decompose(&other, tol, *seed_b)?;
            let m = match_decompositions(&left, &right, tol)?;
            report.decomposition = Some(DecompositionDoc::new(&left, *seed));
            report.matching = Some(MatchingDoc::new(&right, *seed_b, *remix_seed, &m));
            Ok((
                format!(
                    "matched {:?} with {:?} in {} components",
                    left.dimensions(),
                    right.dimensions(),
                    m.components.len()
                ),
                EXIT_OK,
            ))
        }
        Command::FixedStates {
            channel,
            seed,
            state,
        } => {
            let ch = load_channel(channel, tol, report)?;
            let basis = commutant_basis(&ch, tol);
            let dec = iris_decompose(&ch, tol, *seed)?;
            report.commutant_count = Some(basis.count());
            report.decomposition = Some(DecompositionDoc::new(&dec, *seed));
            let block_states = dec
                .blocks()
                .iter()
                .map(|s| MatrixDoc::from_matrix(&s.projector().unscale(s.dim() as f64)))
                .collect();
            let mut summary = format!(
                "commutant dimension {}; {} block states",
                basis.count(),
                dec.blocks().len()
            );
            let classification = match state {
                None => None,
                Some(path) => {
                    let rho = parse_state(&read(path)?)?;
                    let check = is_fixed(&ch, &rho, tol)?;
                    let class = if !check.fixed {
                        ClassificationDoc::NotFixed {
                            fix_residual: check.fix_residual,
                        }
                    } else {
                        match classify_fixed_state(&ch, &rho, &dec, tol)? {
                            FixedStateClass::Mixture { weights, residual } => {
                                ClassificationDoc::Mixture { weights, residual }
                            }
                            FixedStateClass::DegenerateFixedState {
                                commutant_projection,
                                residual,
                            } => ClassificationDoc::DegenerateFixedState {
                                commutant_projection: MatrixDoc::from_matrix(&commutant_projection),
                                residual,
                            },
                        }
                    };
                    summary.push_str(match &class {
                        ClassificationDoc::Mixture { .. } => "; state is a mixture of block states",
                        ClassificationDoc::DegenerateFixedState { .. } => {
                            "; state is fixed but not a mixture over this decomposition"
                        }
                        ClassificationDoc::NotFixed { .. } => "; state is not fixed",
                    });
                    Some(class)
                }
            };
            report.fixed_states = Some(FixedStatesDoc {
                commutant_basis: basis
                    .elements()
                    .iter()
                    .map(MatrixDoc::from_matrix)
                    .collect(),
                block_states,
                classification,
            });
            Ok((summary, EXIT_OK))
        }
        Command::CheckMeasurement {
            channel,
            measurement,
        } => {
            let ch = load_channel(channel, tol, report)?;
            let m = parse_measurement(&read(measurement)?, tol)?;
            let result = measurement_preserved(&ch, &m, tol)?;
            let witnesses = result
                .elements
                .iter()
                .zip(m.elements())
                .map(|(e, op)| {
                    if e.preserved {
                        Ok(None)
                    } else {
                        violation_witness(&ch, op, tol).map(Some)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let preserved = result.elements.iter().filter(|e| e.preserved).count();
            report.measurement = Some(MeasurementDoc::new(&result, &witnesses));
            Ok((
                format!(
                    "{preserved} of {} elements preserved",
                    result.elements.len()
                ),
                EXIT_OK,
            ))
        }
        Command::Capacity {
            channel,
            quantity,
            alpha,
            restarts,
            seed,
            max_iters,
            of,
            block_values,
            decompose_seed,
        } => {
            let ch = load_channel(channel, tol, report)?;
            let opts = QuantityOptions {
                tol: *tol,
                restarts: *restarts,
                seed: *seed,
                max_iters: *max_iters,
            };
            let (quantities, summary) = match quantity {
                QuantityArg::Smin => single(min_output_renyi(&ch, *alpha, *restarts, *seed)?),
                QuantityArg::Ce => single(ent_assisted_capacity(&ch, tol, *max_iters)?),
                QuantityArg::Coh => single(coherent_information(&ch, *restarts, *seed)?),
                QuantityArg::Combine => {
                    let kind = match of {
                        CombineArg::Smin => QuantityKind::MinOutputRenyi { alpha: *alpha },
                        CombineArg::Ce => QuantityKind::EntAssistedCapacity,
                        CombineArg::Coh => QuantityKind::CoherentInformation,
                        CombineArg::Cc => QuantityKind::ClassicalCapacity,
                    };
                    let dec = iris_decompose(&ch, tol, *decompose_seed)?;
                    report.decomposition = Some(DecompositionDoc::new(&dec, *decompose_seed));
                    combine(&ch, &dec, kind, block_values.as_deref(), &opts)?
                }
            };
            report.quantities = Some(quantities);
            Ok((summary, EXIT_OK))
        }
        Command::Gen { .. } => unreachable!("handled before dispatch"),
    }
}

fn single(q: ChannelQuantity) -> (Vec<QuantityDoc>, String) {
    let summary = format!("{} = {:.6} bits", q.kind.name(), q.value);
    (vec![QuantityDoc::new(&q, None)], summary)
}

fn combine(
    ch: &KrausChannel,
    dec: &unital_core::IrisDecomposition,
    kind: QuantityKind,
    block_values: Option<&[f64]>,
    opts: &QuantityOptions,
) -> Result<(Vec<QuantityDoc>, String), CliError> {
    let (mut docs, combined) = match block_values {
        Some(values) => {
            if values.len() != dec.blocks().len() {
                return Err(CliError::Usage(format!(
                    "{} block values supplied for {} blocks",
                    values.len(),
                    dec.blocks().len()
                )));
            }
            let docs: Vec<QuantityDoc> = values
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    QuantityDoc::new(
                        &ChannelQuantity {
                            kind,
                            value: v,
                            method: Method::External,
                            restarts_used: 0,
                            achieved_argument: None,
                        },
                        Some(j),
                    )
                })
                .collect();
            let combined = ChannelQuantity {
                kind,
                value: reduce_over_blocks(kind, values)?,
                method: Method::Combined,
                restarts_used: 0,
                achieved_argument: None,
            };
            (docs, combined)
        }
        None => {
            let r = evaluate_over_blocks(ch, dec, kind, opts)?;
            let docs = r
                .per_block
                .iter()
                .enumerate()
                .map(|(j, q)| QuantityDoc::new(q, Some(j)))
                .collect();
            (docs, r.combined)
        }
    };
    let mut summary = format!(
        "{} combined over {} blocks = {:.6} bits",
        kind.name(),
        dec.blocks().len(),
        combined.value
    );
    if kind == QuantityKind::CoherentInformation {
        summary.push_str(" (lower bound)");
    }
    docs.push(QuantityDoc::new(&combined, None));
    Ok((docs, summary))
}

fn kind_name(kind: GenKind) -> &'static str {
    match kind {
        GenKind::Identity => "identity",
        GenKind::Depolarizing => "depolarizing",
        GenKind::Dephasing => "dephasing",
        GenKind::Unitary => "unitary",
        GenKind::RandomUnital => "random-unital",
        GenKind::BlockSum => "block-sum",
    }
}

fn generate(
    kind: GenKind,
    dim: usize,
    p: f64,
    dims: &[usize],
    seed: u64,
    unitaries: usize,
    tol: &Tolerances,
) -> Result<ChannelDocument, CliError> {
    let (ch, construction) = match kind {
        GenKind::Identity => (
            standard_channel(&StandardChannel::Identity, dim, tol)?,
            "identity".to_string(),
        ),
        GenKind::Depolarizing => (
            standard_channel(&StandardChannel::Depolarizing(p), dim, tol)?,
            format!("depolarizing p={p}"),
        ),
        GenKind::Dephasing => (
            standard_channel(&StandardChannel::Dephasing, dim, tol)?,
            "dephasing".to_string(),
        ),
        GenKind::Unitary => {
            let u = random_unitary(dim, &mut seeded_rng(seed));
            (
                standard_channel(&StandardChannel::Unitary(u), dim, tol)?,
                "haar unitary".to_string(),
            )
        }
        GenKind::RandomUnital => (
            standard_channel(
                &StandardChannel::RandomUnital {
                    n_unitaries: unitaries,
                    seed,
                },
                dim,
                tol,
            )?,
            format!("mixture of {unitaries} haar unitaries"),
        ),
        GenKind::BlockSum => {
            if dims.is_empty() {
                return Err(CliError::Usage("block-sum needs --dims".into()));
            }
            let mut rng = seeded_rng(seed);
            let parts = dims
                .iter()
                .map(|&d| irreducible_block(d, &mut rng, tol))
                .collect::<Result<Vec<_>, _>>()?;
            let bs = block_sum_of(&parts, true, &mut rng, tol)?;
            let dims_text: Vec<String> = dims.iter().map(usize::to_string).collect();
            (
                bs.channel,
                format!("rotated block sum {}", dims_text.join("+")),
            )
        }
    };
    let uses_seed = matches!(
        kind,
        GenKind::Unitary | GenKind::RandomUnital | GenKind::BlockSum
    );
    Ok(ChannelDocument::from_channel(
        &ch,
        Some(Metadata {
            name: Some(kind_name(kind).to_string()),
            seed: uses_seed.then_some(seed),
            construction: Some(construction),
        }),
    ))
}
