use proptest::prelude::*;

use mixmetro_core::sampling::haar_unitary;
use mixmetro_core::state::dephased_entropy;
use mixmetro_core::testing::{random_density, random_product_basis, rng};
use mixmetro_core::{
    apply_unitary, classical_q1_crossing, closed_form_eigensystem, entanglement_boundary,
    partial_transpose, qfi_closed, qfi_spectral, von_neumann_entropy, Complex64, DensityOperator,
    EigenSystem, HammingGenerator, StrategyId,
};

fn strategy() -> impl Strategy<Value = StrategyId> {
    prop::sample::select(StrategyId::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dephasing_never_lowers_entropy(n in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, n);
        let basis = random_product_basis(&mut r, n);
        let before = von_neumann_entropy(&rho).unwrap();
        let after = dephased_entropy(&rho, &basis).unwrap();
        prop_assert!(after >= before - 1e-9, "{after} < {before}");
    }

    #[test]
    fn unitaries_preserve_the_spectrum(n in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, n);
        let u = haar_unitary(&mut r, 1 << n);
        let a = rho.eigenvalues().unwrap();
        let b = apply_unitary(&rho, &u).unwrap().eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution(n in 2usize..=4, seed in any::<u64>(), mask in 1usize..16) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, n);
        let subset: Vec<usize> = (1..=n).filter(|q| mask & (1 << (q - 1)) != 0).collect();
        prop_assume!(!subset.is_empty());
        let once = partial_transpose(&rho, &subset).unwrap();
        let twice = partial_transpose(&DensityOperator::from_matrix_unchecked(n, once).unwrap(), &subset).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn fisher_ignores_rotations_inside_degenerate_blocks(
        s in strategy(),
        n in 2usize..=4,
        p in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let spec = closed_form_eigensystem(s, n, p).unwrap();
        let mut es = EigenSystem { eigenvalues: vec![], eigenvectors: vec![] };
        for entry in &spec.entries {
            let block: Vec<Vec<Complex64>> = entry.eigenvectors().collect();
            let u = haar_unitary(&mut r, block.len());
            for i in 0..block.len() {
                let mut w = vec![Complex64::new(0.0, 0.0); block[0].len()];
                for (j, v) in block.iter().enumerate() {
                    for (wk, vk) in w.iter_mut().zip(v) {
                        *wk += u[(i, j)] * vk;
                    }
                }
                es.eigenvalues.push(entry.eigenvalue);
                es.eigenvectors.push(w);
            }
        }
        let got = qfi_spectral(&es, &HammingGenerator::new(n).unwrap()).unwrap();
        let want = qfi_closed(s, n, p).unwrap();
        prop_assert!((got - want).abs() <= 1e-8 * want.max(1.0), "{s} N={n} p={p}: {got} vs {want}");
    }
}

#[test]
fn cl_q1_crossing_against_q1_entanglement_boundary() {
    // The crossing sits below the Q1 boundary only for two qubits.
    for n in 3..=6 {
        let crossing = classical_q1_crossing(n).unwrap();
        let star = entanglement_boundary(StrategyId::Q1, n).unwrap();
        assert!(
            crossing > star,
            "N={n}: crossing {crossing} boundary {star}"
        );
    }
    let star2 = entanglement_boundary(StrategyId::Q1, 2).unwrap();
    assert!((star2 - (2f64.sqrt() - 1.0)).abs() < 1e-9);
    let cl = qfi_closed(StrategyId::Cl, 2, 0.39).unwrap();
    let q1 = qfi_closed(StrategyId::Q1, 2, 0.39).unwrap();
    assert!(q1 > cl, "p between crossing and boundary favours Q1 at N=2");
}
