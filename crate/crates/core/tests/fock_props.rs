mod common;

use proptest::prelude::*;
use twinfield_core::fock::{
    apply_ladder, commutator_residual, free_evolve, free_hamiltonian_apply, inner_product, number_apply, FockState, LadderKind,
    OccBasisState, Truncation,
};
use twinfield_core::{Complex64, ModeLabel};

use common::*;

fn pool(seed: u64, n: usize) -> Vec<ModeLabel> {
    let mut r = rng(seed);
    (0..n).map(|_| random_label(&mut r, 1.0, 5.0)).collect()
}

proptest! {
    #[test]
    fn ladder_norms_follow_occupation(seed in 0u64..1000) {
        let t = Truncation::default();
        let p = pool(seed, 3);
        let mut r = rng(seed + 1);
        let b = random_basis(&mut r, &p, 2, &t);
        let s = FockState::basis(b.clone());
        for k in &p {
            let n = b.occupation(k, t.label_tol) as f64;
            let down = apply_ladder(&s, k, LadderKind::Annihilate, &t).unwrap();
            prop_assert!((down.norm_sqr() - n).abs() < 1e-12);
            if b.total() < t.n_max {
                let up = apply_ladder(&s, k, LadderKind::Create, &t).unwrap();
                prop_assert!((up.norm_sqr() - (n + 1.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn canonical_commutators_on_random_states(seed in 0u64..1000) {
        let t = Truncation::default();
        let p = pool(seed, 2);
        let mut r = rng(seed + 7);
        let states: Vec<FockState> = (0..3).map(|_| random_fock(&mut r, &p, 3, 1, &t)).collect();
        prop_assert!(commutator_residual(&p[0], &p[0], &states, &t).unwrap() < 1e-12);
        prop_assert!(commutator_residual(&p[0], &p[1], &states, &t).unwrap() < 1e-12);
    }

    #[test]
    fn creation_is_adjoint_of_annihilation(seed in 0u64..1000) {
        let t = Truncation::default();
        let p = pool(seed, 2);
        let mut r = rng(seed + 3);
        let a = random_fock(&mut r, &p, 3, 1, &t);
        let b = random_fock(&mut r, &p, 3, 1, &t);
        let lhs = inner_product(&a, &apply_ladder(&b, &p[0], LadderKind::Create, &t).unwrap());
        let rhs = inner_product(&apply_ladder(&a, &p[0], LadderKind::Annihilate, &t).unwrap(), &b);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn hamiltonian_is_sum_of_number_operators(seed in 0u64..1000) {
        let t = Truncation::default();
        let p = pool(seed, 3);
        let mut r = rng(seed + 11);
        let s = random_fock(&mut r, &p, 4, 1, &t);
        let mut expected = FockState::zero();
        for k in &p {
            expected = expected.axpy(Complex64::new(k.omega(), 0.0), &number_apply(&s, k, t.label_tol), &t);
        }
        prop_assert!(free_hamiltonian_apply(&s).max_diff(&expected, t.label_tol) < 1e-12);
    }

    #[test]
    fn free_evolution_is_unitary_and_a_group(seed in 0u64..1000, t1 in -5.0..5.0f64, t2 in -5.0..5.0f64) {
        let t = Truncation::default();
        let p = pool(seed, 2);
        let mut r = rng(seed + 13);
        let s = random_fock(&mut r, &p, 3, 2, &t);
        let a = free_evolve(&free_evolve(&s, t1), t2);
        let b = free_evolve(&s, t1 + t2);
        prop_assert!(a.max_diff(&b, t.label_tol) < 1e-12);
        prop_assert!((a.norm() - s.norm()).abs() < 1e-12 * (1.0 + s.norm()));
    }
}

#[test]
fn truncation_overflow_is_reported() {
    let t = Truncation::with_n_max(2);
    let k = ModeLabel::new([1.5, 0.0, 0.0], 1.0).unwrap();
    let two = OccBasisState::from_occupancies([(k, 2)], &t).unwrap();
    let err = apply_ladder(&FockState::basis(two), &k, LadderKind::Create, &t).unwrap_err();
    assert!(matches!(err, twinfield_core::Error::TruncationOverflow { n_max: 2 }));
}
