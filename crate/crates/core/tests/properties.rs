use proptest::prelude::*;

use coherence_lab::channels::preparation_channel;
use coherence_lab::gluings::{interference_lsp, interference_sp, LspGluing, SpGluing};
use coherence_lab::interferometer::{build_lsp_dilation, build_sp_dilation, phase_scan};
use coherence_lab::io::{parse_document, to_json, Document};
use coherence_lab::measures::{
    coherence_lsp, coherence_sp, coherent_fidelity_lsp, coherent_fidelity_sp, optimal_aligner,
    shifted_fidelity, GluingClass,
};
use coherence_lab::numerics::{random_unitary, seeded_rng, sub_seed};
use coherence_lab::states::{random_density, uhlmann_fidelity, DensityMatrix, PureState};

fn pair(dim: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    let ra = 1 + (seed as usize) % dim;
    let rb = 1 + (seed as usize / dim) % dim;
    (
        random_density(dim, ra, sub_seed(seed, 0)).unwrap(),
        random_density(dim, rb, sub_seed(seed, 1)).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measures_are_ordered_and_bounded(dim in 2usize..=4, seed in any::<u64>()) {
        let (a, b) = pair(dim, seed);
        let f_lsp = coherent_fidelity_lsp(&a, &b).unwrap();
        let f_sp = coherent_fidelity_sp(&a, &b).unwrap();
        let g_lsp = coherence_lsp(&a, &b).unwrap();
        let g_sp = coherence_sp(&a, &b).unwrap();
        prop_assert!(f_lsp >= -1e-12);
        prop_assert!(f_lsp <= f_sp + 1e-9);
        prop_assert!(f_sp <= g_sp + 1e-9);
        prop_assert!(g_lsp <= g_sp + 1e-9);
        prop_assert!(g_sp <= 1.0 + 1e-9);
        prop_assert!((f_sp - uhlmann_fidelity(&a, &b).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn fidelity_is_symmetric(dim in 2usize..=4, seed in any::<u64>()) {
        let (a, b) = pair(dim, seed);
        let ab = coherent_fidelity_sp(&a, &b).unwrap();
        let ba = coherent_fidelity_sp(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!((coherent_fidelity_sp(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coherence_ignores_local_unitaries(dim in 2usize..=4, seed in any::<u64>()) {
        let (a, b) = pair(dim, seed);
        let a2 = a.conjugate_by(&random_unitary(dim, sub_seed(seed, 2))).unwrap();
        let b2 = b.conjugate_by(&random_unitary(dim, sub_seed(seed, 3))).unwrap();
        prop_assert!((coherence_sp(&a, &b).unwrap() - coherence_sp(&a2, &b2).unwrap()).abs() < 1e-9);
        prop_assert!((coherence_lsp(&a, &b).unwrap() - coherence_lsp(&a2, &b2).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn aligner_attains_coherence(dim in 2usize..=4, seed in any::<u64>()) {
        let (a, b) = pair(dim, seed);
        for (class, g) in [(GluingClass::Lsp, coherence_lsp(&a, &b).unwrap()), (GluingClass::Sp, coherence_sp(&a, &b).unwrap())] {
            let u = optimal_aligner(&a, &b, class).unwrap();
            prop_assert!((shifted_fidelity(&a, &b, &u, class).unwrap() - g).abs() < 1e-9);
        }
    }

    #[test]
    fn formula_matches_simulation(dim in 2usize..=3, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let psi = PureState::random(dim, &mut rng);
        let rho = DensityMatrix::from_pure(&psi);
        let lsp = LspGluing::random(dim, 1 + (seed as usize) % dim, dim, &mut rng);
        let sp = SpGluing::random(dim, dim, 1 + (seed as usize) % dim, &mut rng);
        let sim = phase_scan(&build_lsp_dilation(&lsp).unwrap(), &psi, None).unwrap().pattern.amplitude;
        prop_assert!((sim - interference_lsp(&lsp, &rho).unwrap()).norm() < 1e-10);
        let sim = phase_scan(&build_sp_dilation(&sp).unwrap(), &psi, None).unwrap().pattern.amplitude;
        prop_assert!((sim - interference_sp(&sp, &rho).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn preparation_reaches_target(dim in 2usize..=4, seed in any::<u64>()) {
        let (a, _) = pair(dim, seed);
        let psi = PureState::random(dim, &mut seeded_rng(seed));
        let ch = preparation_channel(&psi, &a).unwrap();
        let out = coherence_lab::channels::apply_channel(&ch, &DensityMatrix::from_pure(&psi)).unwrap();
        prop_assert!(coherence_lab::numerics::max_abs_diff(out.matrix(), a.matrix()) < 1e-12);
    }

    #[test]
    fn documents_round_trip_exactly(dim in 2usize..=4, seed in any::<u64>()) {
        let (a, _) = pair(dim, seed);
        let g = SpGluing::random(dim, 2, dim, &mut seeded_rng(seed));
        for doc in [Document::State(a), Document::GluingSp(g), Document::Unitary(random_unitary(dim, seed))] {
            let text = to_json(&doc);
            let back = parse_document(&text).unwrap();
            prop_assert_eq!(to_json(&back), text);
        }
    }
}
