//! Analysis of unital quantum channels given in Kraus form.
//!
//! The crate computes fixed points (the commutant of the Kraus operators),
//! decomposes a channel into irreducible invariant subspaces, matches two
//! such decompositions, checks whether a measurement's statistics survive the
//! channel, and estimates entropic quantities block by block.
//!
//! ```
//! use unital_core::{iris_decompose, standard_channel, StandardChannel, Tolerances};
//!
//! let tol = Tolerances::default();
//! let ch = standard_channel(&StandardChannel::Dephasing, 2, &tol).unwrap();
//! let dec = iris_decompose(&ch, &tol, 7).unwrap();
//! assert_eq!(dec.dimensions(), vec![1, 1]);
//! ```

pub mod capacity;
pub mod channel;
pub mod construct;
pub mod error;
pub mod fixed;
pub mod iris;
pub mod linalg;
pub mod measurement;
pub mod random;
pub mod tolerance;

pub use capacity::{
    coherent_information, ent_assisted_capacity, evaluate, evaluate_over_blocks, min_output_renyi,
    reduce_over_blocks, renyi_entropy, ChannelQuantity, Method, QuantityKind, QuantityOptions,
};
pub use channel::{standard_channel, validate, KrausChannel, StandardChannel, ValidationReport};
pub use construct::{random_block_sum, BlockSum};
pub use error::{Error, Result};
pub use fixed::{
    classify_fixed_state, commutant_basis, fixed_pure_state_check, is_fixed, CommutantBasis,
    FixedStateClass,
};
pub use iris::{
    iris_decompose, is_invariant_subspace, match_decompositions, restrict, DecompositionMatching,
    IrisDecomposition, Subspace,
};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use measurement::{
    measurement_preserved, statistics_preserved, violation_witness, Measurement, MeasurementReport,
    Povm, ProjectiveMeasurement,
};
pub use tolerance::Tolerances;
