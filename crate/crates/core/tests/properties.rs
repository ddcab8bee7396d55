mod common;

use common::{random_structured, random_test_subspace, remix_unitary, span_of, tol, trace_re};
use proptest::prelude::*;
use rand::Rng;
use unital_core::capacity::{
    ent_assisted_capacity, min_output_renyi, renyi_entropy, spectrum_entropy,
};
use unital_core::fixed::fixed_space_dimension_via_superoperator;
use unital_core::iris::offdiagonal_residual;
use unital_core::linalg::{
    hermitian_eig, identity, max_abs, max_abs_diff, min_eigenvalue, null_space,
    orthonormal_complement, rank,
};
use unital_core::measurement::{
    channels_commute, povm_structural_decomposition, projection_intertwines, projective_channel,
    StructuralDecomposition,
};
use unital_core::random::{
    complex_gaussian, random_density_matrix, random_hermitian, random_subspace_basis,
    random_weights, seeded_rng,
};
use unital_core::{
    commutant_basis, iris_decompose, is_fixed, is_invariant_subspace, match_decompositions,
    restrict, statistics_preserved, violation_witness, IrisDecomposition, ProjectiveMeasurement,
    Subspace,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed: u64, d in 1usize..=8) {
        let m = random_hermitian(d, &mut seeded_rng(seed));
        let eig = hermitian_eig(&m, &tol()).unwrap();
        prop_assert!(max_abs_diff(&eig.reconstruct(), &m) <= 1e-10 * max_abs(&m).max(1.0));
    }

    #[test]
    fn rank_nullity(seed: u64, rows in 1usize..=7, cols in 1usize..=7, k in 0usize..=7) {
        let mut rng = seeded_rng(seed);
        let k = k.min(rows).min(cols);
        let m = complex_gaussian(rows, k, &mut rng) * complex_gaussian(k, cols, &mut rng);
        prop_assert_eq!(null_space(&m, &tol()).ncols() + rank(&m, &tol()), cols);
    }

    #[test]
    fn complement_is_an_involution(seed: u64, d in 2usize..=7, k in 1usize..=6) {
        let k = k.min(d - 1);
        let b = random_subspace_basis(d, k, &mut seeded_rng(seed));
        let back = orthonormal_complement(&orthonormal_complement(&b, d).unwrap(), d).unwrap();
        let s = Subspace::new(b).unwrap();
        let t = Subspace::new(back).unwrap();
        prop_assert!(s.projector_distance(&t) <= 1e-10);
    }

    #[test]
    fn channels_are_unital_trace_and_positivity_preserving(seed: u64) {
        let mut rng = seeded_rng(seed);
        let ch = random_structured(6, &mut rng).channel;
        let d = ch.dim();
        prop_assert!(max_abs_diff(&ch.apply(&identity(d)).unwrap(), &identity(d)) <= 1e-10);
        let sigma = random_hermitian(d, &mut rng);
        prop_assert!((trace_re(&ch.apply(&sigma).unwrap()) - trace_re(&sigma)).abs() <= 1e-10);
        let rho = random_density_matrix(d, &mut rng);
        prop_assert!(min_eigenvalue(&ch.apply(&rho).unwrap()) >= -1e-10);
    }

    #[test]
    fn remix_keeps_the_superoperator(seed: u64) {
        let mut rng = seeded_rng(seed);
        let ch = random_structured(5, &mut rng).channel;
        let u = remix_unitary(ch.kraus_count(), &mut rng);
        let remixed = ch.remix_kraus(&u, &tol()).unwrap();
        prop_assert!(ch.superoperator_distance(&remixed).unwrap() <= 1e-10);
        prop_assert_eq!(commutant_basis(&ch, &tol()).count(), commutant_basis(&remixed, &tol()).count());
    }

    #[test]
    fn adjoint_duality(seed: u64) {
        let mut rng = seeded_rng(seed);
        let ch = random_structured(6, &mut rng).channel;
        let e = random_hermitian(ch.dim(), &mut rng);
        let rho = random_density_matrix(ch.dim(), &mut rng);
        let lhs = (&e * ch.apply(&rho).unwrap()).trace();
        let rhs = (ch.apply_adjoint(&e).unwrap() * &rho).trace();
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn fix_and_commute_flags_agree(seed: u64) {
        let mut rng = seeded_rng(seed);
        let ch = random_structured(6, &mut rng).channel;
        let basis = commutant_basis(&ch, &tol());
        let weights: Vec<f64> = (0..basis.count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fixed = basis.combine(&weights);
        let perturbed = &fixed + random_hermitian(ch.dim(), &mut rng).scale(1e-6);
        let generic = random_hermitian(ch.dim(), &mut rng);
        for sigma in [fixed, perturbed, generic] {
            let check = is_fixed(&ch, &sigma, &tol()).unwrap();
            prop_assert_eq!(check.fix_residual <= tol().residual, check.commute_residual <= tol().residual);
        }
    }

    #[test]
    fn commutant_elements_are_fixed_and_counted_consistently(seed: u64) {
        let mut rng = seeded_rng(seed);
        let ch = random_structured(5, &mut rng).channel;
        let basis = commutant_basis(&ch, &tol());
        for h in basis.elements() {
            prop_assert!(is_fixed(&ch, h, &tol()).unwrap().fixed);
        }
        // The Hermitian commutant has the same real dimension as the complex
        // fixed space of Φ.
        prop_assert_eq!(basis.count(), fixed_space_dimension_via_superoperator(&ch, &tol()));
    }

    #[test]
    fn invariance_criteria_agree(seed: u64) {
        let mut rng = seeded_rng(seed);
        let bs = random_structured(6, &mut rng);
        let s = random_test_subspace(&bs, &mut rng);
        let flag = is_invariant_subspace(&bs.channel, &s, &tol()).unwrap().invariant;
        let off = offdiagonal_residual(&bs.channel, &s).unwrap() <= tol().residual;
        let complement = is_invariant_subspace(&bs.channel, &s.complement().unwrap(), &tol()).unwrap().invariant;
        let intertwines = projection_intertwines(&bs.channel, &s.projector(), &tol()).unwrap().holds;
        prop_assert_eq!(flag, off);
        prop_assert_eq!(flag, complement);
        prop_assert_eq!(flag, intertwines);
    }

    #[test]
    fn decompositions_are_sound_and_unique(seed: u64) {
        let mut rng = seeded_rng(seed);
        let bs = random_structured(6, &mut rng);
        let ch = &bs.channel;
        let reference = iris_decompose(ch, &tol(), 0).unwrap();
        for block in reference.restricted_channels(ch, &tol()).unwrap() {
            prop_assert!(block.validation(&tol()).is_valid());
            prop_assert_eq!(commutant_basis(&block, &tol()).count(), 1);
        }
        let remixed = ch.remix_kraus(&remix_unitary(ch.kraus_count(), &mut rng), &tol()).unwrap();
        for (other, s) in [(ch, 1u64), (ch, 99), (&remixed, 5)] {
            let dec = iris_decompose(other, &tol(), s).unwrap();
            prop_assert_eq!(dec.dimensions(), reference.dimensions());
            prop_assert!(match_decompositions(&reference, &dec, &tol()).is_ok());
        }
    }

    #[test]
    fn recovered_blocks_respect_the_embedded_boundary(seed: u64) {
        let mut rng = seeded_rng(seed);
        let bs = random_structured(6, &mut rng);
        let dec = iris_decompose(&bs.channel, &tol(), seed).unwrap();
        // Constituents are irreducible, so the multisets agree exactly.
        let mut embedded: Vec<usize> = bs.blocks.iter().map(Subspace::dim).collect();
        embedded.sort_unstable();
        prop_assert_eq!(dec.dimensions(), embedded);
        // Equivalent constituents (several identity rays) may be recombined,
        // so spans are compared per matched component.
        let embedded = IrisDecomposition::certify(&bs.channel, bs.blocks.clone(), &tol()).unwrap();
        let matching = match_decompositions(&dec, &embedded, &tol()).unwrap();
        for comp in &matching.components {
            let left = span_of(&comp.left_blocks.iter().map(|&i| &dec.blocks()[i]).collect::<Vec<_>>());
            let right = span_of(&comp.right_blocks.iter().map(|&j| &embedded.blocks()[j]).collect::<Vec<_>>());
            prop_assert!(left.projector_distance(&right) <= 1e-8);
        }
    }

    #[test]
    fn block_count_matches_commutant_for_distinct_blocks(seed: u64) {
        let mut rng = seeded_rng(seed);
        // Generic blocks of dimension ≥ 2 are pairwise inequivalent.
        let dims = common::random_partition(rng.random_range(2..=6), 3, &mut rng)
            .into_iter()
            .map(|d| d.max(2))
            .collect::<Vec<_>>();
        let bs = unital_core::random_block_sum(&dims, &mut rng, &tol()).unwrap();
        let dec = iris_decompose(&bs.channel, &tol(), 3).unwrap();
        prop_assert_eq!(dec.blocks().len(), commutant_basis(&bs.channel, &tol()).count());
    }

    #[test]
    fn irreducible_fixed_states_are_maximally_mixed(seed: u64, d in 2usize..=5) {
        let mut rng = seeded_rng(seed);
        let bs = unital_core::random_block_sum(&[d], &mut rng, &tol()).unwrap();
        let basis = commutant_basis(&bs.channel, &tol());
        prop_assert_eq!(basis.count(), 1);
        let projected = basis.project(&random_density_matrix(d, &mut rng));
        prop_assert!(max_abs_diff(&projected, &identity(d).scale(1.0 / d as f64)) <= 1e-8);
    }

    #[test]
    fn mixtures_of_block_states_are_fixed(seed: u64) {
        let mut rng = seeded_rng(seed);
        let bs = random_structured(6, &mut rng);
        let dec = iris_decompose(&bs.channel, &tol(), 1).unwrap();
        let w = random_weights(dec.blocks().len(), &mut rng);
        let mut rho = identity(bs.channel.dim()).scale(0.0);
        for (wj, s) in w.iter().zip(dec.blocks()) {
            rho += s.projector().scale(wj / s.dim() as f64);
        }
        prop_assert!(is_fixed(&bs.channel, &rho, &tol().with_residual(1e-10)).unwrap().fixed);
    }

    #[test]
    fn projective_equivalences(seed: u64) {
        let mut rng = seeded_rng(seed);
        let bs = random_structured(6, &mut rng);
        let s = random_test_subspace(&bs, &mut rng);
        let m = ProjectiveMeasurement::from_subspaces(&[s.clone(), s.complement().unwrap()]).unwrap();
        let commute = channels_commute(&projective_channel(&m, &tol()).unwrap(), &bs.channel, &tol()).unwrap().holds;
        let invariant = is_invariant_subspace(&bs.channel, &s, &tol()).unwrap().invariant;
        let preserved = m
            .projectors()
            .iter()
            .all(|p| statistics_preserved(&bs.channel, p, &tol()).unwrap().holds);
        prop_assert_eq!(invariant, preserved);
        prop_assert_eq!(commute, invariant);
    }

    #[test]
    fn block_combinations_are_preserved_and_others_witnessed(seed: u64) {
        let mut rng = seeded_rng(seed);
        let bs = random_structured(6, &mut rng);
        let dec = iris_decompose(&bs.channel, &tol(), 2).unwrap();
        let d = bs.channel.dim();
        let mut e = identity(d).scale(0.0);
        for s in dec.blocks() {
            e += s.projector().scale(rng.random_range(0.0..1.0));
        }
        prop_assert!(statistics_preserved(&bs.channel, &e, &tol()).unwrap().holds);
        prop_assert!(povm_structural_decomposition(&bs.channel, &e, &tol()).unwrap().is_terms());

        let noisy = e.scale(0.8) + random_density_matrix(d, &mut rng).scale(0.2);
        let flag = statistics_preserved(&bs.channel, &noisy, &tol()).unwrap().holds;
        let structural = povm_structural_decomposition(&bs.channel, &noisy, &tol()).unwrap();
        prop_assert_eq!(flag, structural.is_terms());
        if !flag {
            let failed = matches!(structural, StructuralDecomposition::Failure { .. });
            prop_assert!(failed);
            let w = violation_witness(&bs.channel, &noisy, &tol()).unwrap();
            let direct = (&noisy * &w.state).trace().re - (&noisy * bs.channel.apply(&w.state).unwrap()).trace().re;
            let diff = &noisy - bs.channel.apply_adjoint(&noisy).unwrap();
            let top = hermitian_eig(&diff, &tol()).unwrap().values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            prop_assert!(direct.abs() > tol().residual);
            prop_assert!((direct.abs() - top).abs() <= 1e-10);
        }
    }

    #[test]
    fn entropy_bounds(seed: u64, d in 1usize..=6, alpha in 1.0f64..6.0) {
        let rho = random_density_matrix(d, &mut seeded_rng(seed));
        let s = renyi_entropy(&rho, alpha).unwrap();
        prop_assert!(s >= 0.0 && s <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn renyi_is_non_increasing_in_alpha(seed: u64, d in 2usize..=6) {
        let rho = random_density_matrix(d, &mut seeded_rng(seed));
        let values: Vec<f64> = [1.0, 1.5, 2.0, 5.0].iter().map(|&a| renyi_entropy(&rho, a).unwrap()).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn min_output_entropy_is_monotone_in_alpha(seed: u64) {
        let mut rng = seeded_rng(seed);
        let ch = unital_core::random_block_sum(&[3], &mut rng, &tol()).unwrap().channel;
        let values: Vec<f64> = [1.0, 2.0, 5.0]
            .iter()
            .map(|&a| min_output_renyi(&ch, a, 16, seed).unwrap().value)
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + tol().optimizer);
        }
        prop_assert!(values[0] <= 3f64.log2());
    }

    #[test]
    fn quantities_survive_remixing(seed: u64) {
        let mut rng = seeded_rng(seed);
        let ch = unital_core::random_block_sum(&[2, 1], &mut rng, &tol()).unwrap().channel;
        let remixed = ch.remix_kraus(&remix_unitary(ch.kraus_count(), &mut rng), &tol()).unwrap();
        let a = ent_assisted_capacity(&ch, &tol(), 5000).unwrap().value;
        let b = ent_assisted_capacity(&remixed, &tol(), 5000).unwrap().value;
        prop_assert!((a - b).abs() <= tol().optimizer);
        let a = min_output_renyi(&ch, 2.0, 16, 1).unwrap().value;
        let b = min_output_renyi(&remixed, 2.0, 16, 1).unwrap().value;
        prop_assert!((a - b).abs() <= tol().optimizer);
        let a = unital_core::coherent_information(&ch, 8, 1).unwrap().value;
        let b = unital_core::coherent_information(&remixed, 8, 1).unwrap().value;
        prop_assert!((a - b).abs() <= tol().optimizer);
    }

    #[test]
    fn coherent_information_is_at_least_the_best_block(seed: u64) {
        let mut rng = seeded_rng(seed);
        let bs = unital_core::random_block_sum(&[2, 2], &mut rng, &tol()).unwrap();
        let full = unital_core::coherent_information(&bs.channel, 16, seed).unwrap().value;
        let best_block = bs
            .blocks
            .iter()
            .map(|s| {
                let block = restrict(&bs.channel, s, &tol()).unwrap();
                unital_core::coherent_information(&block, 16, seed).unwrap().value
            })
            .fold(0.0_f64, f64::max);
        prop_assert!(full >= best_block - tol().optimizer);
    }
}

#[test]
fn spectrum_entropy_matches_the_density_matrix_route() {
    let rho = random_density_matrix(4, &mut seeded_rng(12));
    let values = hermitian_eig(&rho, &tol()).unwrap().values;
    for alpha in [1.0, 2.0, 3.5] {
        let a = spectrum_entropy(&values, alpha);
        let b = renyi_entropy(&rho, alpha).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn union_of_embedded_blocks_is_invariant() {
    let mut rng = seeded_rng(7);
    let bs = unital_core::random_block_sum(&[1, 2, 2], &mut rng, &tol()).unwrap();
    let union = span_of(&[&bs.blocks[0], &bs.blocks[2]]);
    assert!(
        is_invariant_subspace(&bs.channel, &union, &tol())
            .unwrap()
            .invariant
    );
}
