use num_complex::Complex64;
use proptest::prelude::*;
use qtransduce::quantumsim::{
    beam_splitter, ies_swap_oracle, make_ghz, teleport, teleport_with_outcomes, transducer_output_state, BellOutcome,
    EprResource, FockTwoMode, ModeLabel, PureState,
};
use qtransduce::strategies::DetectorModel;
use qtransduce::transducer::{
    binary_entropy, cooperativity_for_efficiency, distillable_entanglement, efficiency, efficiency_physical, reduce,
    scattering_matrix, Branch, PhysicalParams, ReducedParams,
};
use qtransduce::Error;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

fn physical() -> impl Strategy<Value = PhysicalParams> {
    (
        1e-3f64..1e3,
        1e-3f64..1e3,
        0.01f64..=1.0,
        0.01f64..=1.0,
        1e-4f64..1e2,
        1e-2f64..1e6,
    )
        .prop_map(|(go, gm, zo, zm, g, n)| PhysicalParams::new(zo * go, zm * gm, go, gm, g, n).unwrap())
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn physical_and_reduced_forms_agree(p in physical()) {
        let direct = efficiency_physical(&p).unwrap();
        let reduced = efficiency(&reduce(&p).unwrap());
        prop_assert!(rel_close(direct, reduced, 1e-12), "{direct} vs {reduced}");
    }

    #[test]
    fn efficiency_is_scale_invariant(p in physical(), k in 1e-3f64..1e3) {
        let scaled = PhysicalParams::new(
            k * p.coupling_optical_ext,
            k * p.coupling_microwave_ext,
            k * p.loss_optical,
            k * p.loss_microwave,
            k * p.electro_optic_coupling,
            p.mean_pump_photons,
        )
        .unwrap();
        let (a, b) = (efficiency_physical(&p).unwrap(), efficiency_physical(&scaled).unwrap());
        prop_assert!(rel_close(a, b, 1e-12));
        let (ra, rb) = (reduce(&p).unwrap(), reduce(&scaled).unwrap());
        prop_assert!(rel_close(ra.cooperativity, rb.cooperativity, 1e-12));
    }

    #[test]
    fn scattering_matrix_is_unitary(go in 1e-3f64..1e3, gm in 1e-3f64..1e3, g in 1e-4f64..1e2, n in 1e-2f64..1e6) {
        let p = PhysicalParams::new(go, gm, go, gm, g, n).unwrap();
        let s = scattering_matrix(&p).unwrap();
        prop_assert!(s.unitarity_defect() < 1e-12);
        prop_assert!((s.transmission() - efficiency_physical(&p).unwrap()).abs() < 1e-12);
        prop_assert!((s.transmission() + s.reflection() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_round_trips_on_both_branches(c in 1e-6f64..1e6, zo in 0.05f64..=1.0, zm in 0.05f64..=1.0) {
        let eta = efficiency(&ReducedParams::new(c, zo, zm).unwrap());
        let branch = if c <= 1.0 { Branch::Lower } else { Branch::Upper };
        let back = cooperativity_for_efficiency(eta, zo, zm, branch).unwrap();
        prop_assert!(rel_close(back, c, 1e-10) || (back - c).abs() < 1e-10, "{c} -> {eta} -> {back}");
    }

    #[test]
    fn efficiency_round_trips_through_inverse(t in 1e-9f64..1.0, k in 0.05f64..=1.0) {
        let target = t * k;
        for branch in [Branch::Lower, Branch::Upper] {
            let c = cooperativity_for_efficiency(target, k, 1.0, branch).unwrap();
            let eta = efficiency(&ReducedParams::new(c, k, 1.0).unwrap());
            prop_assert!((eta - target).abs() < 1e-10);
        }
    }

    #[test]
    fn distillable_entanglement_is_binary_entropy(eta in 0.0f64..=1.0) {
        prop_assert!((distillable_entanglement(eta).unwrap() - binary_entropy(eta).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn beam_splitter_conserves_photons(
        re in proptest::collection::vec(-1.0f64..1.0, 9),
        im in proptest::collection::vec(-1.0f64..1.0, 9),
        t in 0.0f64..=1.0,
    ) {
        let cutoff = 4;
        let mut terms = Vec::new();
        let mut k = 0;
        for a in 0..=2 {
            for b in 0..=2 {
                terms.push(((a, b), Complex64::new(re[k], im[k])));
                k += 1;
            }
        }
        let norm: f64 = terms.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        for (_, z) in terms.iter_mut() {
            *z /= norm;
        }
        let state = FockTwoMode::from_terms(cutoff, (ModeLabel::Optical, ModeLabel::Optical), &terms).unwrap();
        let out = beam_splitter(&state, t).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        for n in 0..=4 {
            prop_assert!((out.total_photon_probability(n) - state.total_photon_probability(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_branch_probabilities_are_exact(eta in 0.0f64..=1.0, seed in any::<u64>()) {
        let out = ies_swap_oracle(eta, eta, &DetectorModel::photon_counter(), seed).unwrap();
        prop_assert!((out.classes.single - 2.0 * (eta - eta * eta)).abs() < 1e-12);
        prop_assert!((out.classes.double - eta * eta).abs() < 1e-12);
        prop_assert!((out.classes.no_photon - (1.0 - eta).powi(2)).abs() < 1e-12);
        let total: f64 = out.branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn efficiency_shape_on_unit_extraction() {
    let eta = |c: f64| efficiency(&ReducedParams::ideal(c).unwrap());
    assert_eq!(eta(1.0), 1.0);
    let rising: Vec<f64> = (0..=500).map(|i| i as f64 / 500.0).collect();
    assert!(rising.windows(2).all(|w| eta(w[0]) < eta(w[1])));
    let falling: Vec<f64> = (0..=500).map(|i| 1.0 + i as f64 / 5.0).collect();
    assert!(falling.windows(2).all(|w| eta(w[0]) > eta(w[1])));
}

#[test]
fn output_state_entropy_tracks_binary_entropy() {
    for i in 0..=100 {
        let eta = i as f64 / 100.0;
        let s = transducer_output_state(eta).unwrap();
        assert!((s.entanglement_entropy() - binary_entropy(eta).unwrap()).abs() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

fn random_state(n: usize, rng: &mut Xoshiro256PlusPlus) -> PureState {
    let amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::from_amplitudes(amps.into_iter().map(|z| z / norm).collect()).unwrap()
}

#[test]
fn teleportation_is_exact_for_every_outcome() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2024);
    for n in 1..=4 {
        for _ in 0..3 {
            let state = random_state(n, &mut rng);
            let resources = vec![EprResource::Ideal; n];
            for pattern in 0..4usize.pow(n as u32) {
                let outcomes: Vec<BellOutcome> =
                    (0..n).map(|i| BellOutcome::all()[(pattern >> (2 * i)) & 3]).collect();
                let out = teleport_with_outcomes(&state, &resources, &outcomes).unwrap();
                let f = out.fidelity(&state).unwrap();
                assert!((f - 1.0).abs() < 1e-10, "n = {n}, pattern = {pattern}: {f}");
                assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sampled_teleportation_and_resource_errors() {
    let ghz = make_ghz(3).unwrap();
    for seed in 0..20 {
        let out = teleport(&ghz, &[EprResource::Ideal; 3], seed).unwrap();
        assert!((out.fidelity(&ghz).unwrap() - 1.0).abs() < 1e-10);
    }
    assert_eq!(
        teleport(&ghz, &[EprResource::Ideal, EprResource::Erased, EprResource::Ideal], 0),
        Err(Error::ErasedResource(1))
    );
    assert!(matches!(
        teleport(&ghz, &[EprResource::Ideal; 2], 0),
        Err(Error::ResourceMismatch { .. })
    ));
}
