use odsim_core::gaussian::{GaussianState, SymplecticTransform, PHYSICALITY_TOL};
use odsim_core::medium::{march, Coupling, DetuningProfile, EffectiveParams, PropagationGrid};
use proptest::prelude::*;

fn eff(eps: f64) -> EffectiveParams {
    EffectiveParams::from_epsilon_kappa(eps, 1.0).unwrap()
}

fn terminal(
    input: &GaussianState,
    eps: f64,
    length: f64,
    steps: usize,
    omega: f64,
    profile: &DetuningProfile,
    coupling: Coupling,
) -> GaussianState {
    let grid = PropagationGrid::new(length, steps, vec![omega]).unwrap();
    march(input, &eff(eps), 1.0, &grid, omega, profile, coupling)
        .unwrap()
        .pop()
        .unwrap()
        .physical
}

fn squeezed_input(r: f64) -> GaussianState {
    GaussianState::vacuum(&["a", "b"])
        .unwrap()
        .apply(&SymplecticTransform::two_mode_squeezer(r, "a", "b").unwrap())
        .unwrap()
        .apply(&SymplecticTransform::single_mode_squeezer(0.2, "a").unwrap())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_propagation_matches_single_call(
        eps in 0.0..0.9f64, omega in -3.0..3.0f64, z1 in 0.1..4.0f64, z2 in 0.1..4.0f64, r in -0.8..0.8f64,
    ) {
        let input = squeezed_input(r);
        let none = DetuningProfile::None;
        let mid = terminal(&input, eps, z1, 10, omega, &none, Coupling::Direct);
        let split = terminal(&mid, eps, z2, 10, omega, &none, Coupling::Direct);
        let whole = terminal(&input, eps, z1 + z2, 20, omega, &none, Coupling::Direct);
        prop_assert!((split.cov() - whole.cov()).amax() < 1e-10);
        prop_assert!((split.mean() - whole.mean()).amax() < 1e-10);
    }

    #[test]
    fn every_slice_is_physical(eps in 0.0..0.95f64, omega in -5.0..5.0f64, r in -1.0..1.0f64) {
        let input = squeezed_input(r);
        let grid = PropagationGrid::new(5.0, 25, vec![omega]).unwrap();
        let profile = DetuningProfile::Linear { beta: 0.3 };
        for s in march(&input, &eff(eps), 1.0, &grid, omega, &profile, Coupling::Direct).unwrap() {
            prop_assert!(s.physical.min_symplectic_eigenvalue().unwrap() >= 0.5 - PHYSICALITY_TOL);
        }
    }

    #[test]
    fn resonant_result_is_independent_of_slicing(eps in 0.0..0.9f64, r in -0.8..0.8f64) {
        let input = squeezed_input(r);
        let none = DetuningProfile::None;
        let coarse = terminal(&input, eps, 7.0, 10, 0.0, &none, Coupling::Direct);
        let fine = terminal(&input, eps, 7.0, 640, 0.0, &none, Coupling::Direct);
        prop_assert!((coarse.cov() - fine.cov()).amax() < 1e-12);
    }

    #[test]
    fn bright_vacuum_passes_unchanged(eps in 0.0..0.9f64, omega in -5.0..5.0f64, beta in 0.0..1.0f64) {
        let input = GaussianState::tmsv(eps, ("a", "b")).unwrap();
        let profile = DetuningProfile::Linear { beta };
        let out = terminal(&input, eps, 12.0, 30, omega, &profile, Coupling::Direct);
        prop_assert!((out.cov() - input.cov()).amax() < 1e-9);
    }

    #[test]
    fn two_samples_empty_both_bogoliubov_modes(eps in 0.05..0.9f64, r in -0.8..0.8f64) {
        let input = squeezed_input(r);
        let none = DetuningProfile::None;
        let mid = terminal(&input, eps, 40.0, 20, 0.0, &none, Coupling::Direct);
        let out = terminal(&mid, eps, 40.0, 20, 0.0, &none, Coupling::Inverted);
        let tmsv = GaussianState::tmsv(eps, ("a", "b")).unwrap();
        prop_assert!((out.cov() - tmsv.cov()).amax() < 1e-9);
    }
}

#[test]
fn detuned_refinement_converges() {
    let input = GaussianState::vacuum(&["a", "b"]).unwrap();
    let profile = DetuningProfile::Linear { beta: 0.2 };
    let run = |steps| terminal(&input, 0.5, 60.0, steps, 0.0, &profile, Coupling::Direct);
    let (c, m, f) = (run(200), run(400), run(800));
    let e1 = (c.cov() - m.cov()).amax();
    let e2 = (m.cov() - f.cov()).amax();
    assert!(
        e2 < e1,
        "refinement does not shrink the change: {e1} then {e2}"
    );
    assert!(e1 / e2 > 1.8, "convergence ratio {}", e1 / e2);
}

#[test]
fn dark_tmsv_is_bogoliubov_vacuum() {
    for eps in [0.0, 0.3, 0.7] {
        let bd = GaussianState::tmsv(eps, ("a", "b"))
            .unwrap()
            .apply(&SymplecticTransform::bogoliubov(eps, "a", "b").unwrap())
            .unwrap();
        let vac = GaussianState::vacuum(&["a", "b"]).unwrap();
        assert!((bd.cov() - vac.cov()).amax() < 1e-12);
    }
}

#[test]
fn mismatched_input_is_rejected() {
    let three = GaussianState::vacuum(&["a", "b", "c"]).unwrap();
    let grid = PropagationGrid::new(1.0, 10, vec![0.0]).unwrap();
    assert!(march(
        &three,
        &eff(0.5),
        1.0,
        &grid,
        0.0,
        &DetuningProfile::None,
        Coupling::Direct
    )
    .is_err());
}
