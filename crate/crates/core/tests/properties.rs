use std::f64::consts::LN_2;

use proptest::prelude::*;
use qdmera::dmera::calibrate::structural_counts;
use qdmera::dmera::layout::{skeleton, GateRole};
use qdmera::dmera::{
    build_dmera, causal_cone, decompose_gate, gate_fabric, predicted_qubits_left, predicted_qubits_right,
    swap_isometry_inputs, DmeraSpec, GateFabricParams, Layout, Side, SubsystemSpec,
};
use qdmera::lrtim::{lrtim_hamiltonian, LrtimParams};
use qdmera::noise::{apply_depolarizing, apply_noisy_gate, apply_readout_noise, mitigate_readout, symmetric_confusion};
use qdmera::qsim::{
    hermitian_eigenvalues, trace_distance, unitarity_defect, von_neumann_entropy, GateApplication, MixedState,
    PureState,
};
use qdmera::C64;

fn random_state(n: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| PureState::normalized(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn angle() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

fn params() -> impl Strategy<Value = GateFabricParams> {
    (angle(), angle()).prop_map(|(a, b)| GateFabricParams::new(a, b))
}

fn swap_gate() -> [[C64; 4]; 4] {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    [[o, z, z, z], [z, z, o, z], [z, o, z, z], [z, z, z, o]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bipartition_entropies_agree(psi in random_state(5), cut in 1usize..5) {
        let a: Vec<usize> = (0..cut).collect();
        let b: Vec<usize> = (cut..5).collect();
        let sa = von_neumann_entropy(&psi.partial_trace(&a).unwrap());
        let sb = von_neumann_entropy(&psi.partial_trace(&b).unwrap());
        prop_assert!((sa - sb).abs() < 1e-10);
        prop_assert!(sa <= cut.min(5 - cut) as f64 * LN_2 + 1e-12);
    }

    #[test]
    fn trace_distance_is_a_metric(x in random_state(4), y in random_state(4), z in random_state(4)) {
        let keep = [0, 2];
        let (a, b, c) = (x.partial_trace(&keep).unwrap(), y.partial_trace(&keep).unwrap(), z.partial_trace(&keep).unwrap());
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-12);
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-12);
    }

    #[test]
    fn fabric_gates_are_unitary_parity_preserving_and_decompose(p in params()) {
        let u = gate_fabric(p);
        prop_assert!(unitarity_defect(&u) < 1e-14);
        // Z (x) Z is diag(1, -1, -1, 1): entries between sectors must vanish
        for (i, row) in u.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if (i == 0 || i == 3) != (j == 0 || j == 3) {
                    prop_assert!(x.norm() == 0.0);
                }
            }
        }
        let d = decompose_gate(p).unitary();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((d[i][j] - u[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gates_preserve_norm_and_trace(psi in random_state(4), p in params(), a in 0usize..4, b in 0usize..4, noise in 0.0f64..1.0) {
        prop_assume!(a != b);
        let g = GateApplication::new((a, b), gate_fabric(p)).unwrap();
        let mut phi = psi.clone();
        phi.apply(&g).unwrap();
        prop_assert!((phi.norm_sqr() - 1.0).abs() < 1e-12);
        let mut rho = MixedState::from_pure(&psi);
        apply_noisy_gate(&mut rho, (a, b), &gate_fabric(p), noise, 3).unwrap();
        apply_depolarizing(&mut rho, (b, a), noise).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermiticity_defect() < 1e-12);
        prop_assert!(hermitian_eigenvalues(&rho).iter().all(|&l| l > -1e-10));
    }

    #[test]
    fn dmera_outputs_are_even_and_normalized(seed in any::<u64>(), n in prop::sample::select(vec![4usize, 8, 16])) {
        let psi = build_dmera(&DmeraSpec::random(n, Layout::CALIBRATED, seed).unwrap()).simulate();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((psi.parity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lrtim_commutes_with_parity(n in 2usize..7, h in 0.01f64..10.0, alpha in 0.1f64..4.0) {
        let ham = lrtim_hamiltonian(&LrtimParams::new(n, h, alpha)).unwrap();
        prop_assert!(ham.parity_commutator_norm() < 1e-12);
    }

    #[test]
    fn readout_inverse_round_trips(raw in prop::collection::vec(0.0f64..1.0, 8), flips in prop::collection::vec(0.0f64..0.3, 3)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let conf: Vec<_> = flips.iter().map(|&f| symmetric_confusion(f)).collect();
        let back = mitigate_readout(&apply_readout_noise(&p, &conf).unwrap(), &conf).unwrap();
        for (x, y) in back.iter().zip(&p) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn swapped_isometry_inputs_give_the_same_state(seed in any::<u64>(), pick in any::<usize>()) {
        let n = 8;
        let spec = DmeraSpec::random(n, Layout::CALIBRATED, seed).unwrap();
        let sk = skeleton(n, Layout::CALIBRATED).unwrap();
        let isometries: Vec<usize> = (0..sk.gates.len()).filter(|&k| sk.gates[k].role == GateRole::Isometry).collect();
        let k = isometries[pick % isometries.len()];
        let circuit = build_dmera(&spec);

        // reference: SWAP the inputs of gate k, so the ancilla enters on the left leg
        let mut a = circuit.initial_state();
        for (i, g) in circuit.gates.iter().enumerate() {
            if i == k {
                a.apply(&GateApplication::new(g.wires, swap_gate()).unwrap()).unwrap();
            }
            a.apply(&GateApplication::new(g.wires, gate_fabric(g.params)).unwrap()).unwrap();
        }
        // transformed angles on the unswapped circuit
        let mut angles = spec.angles().to_vec();
        angles[k] = swap_isometry_inputs(angles[k], sk.inits[sk.gates[k].wires.1]);
        let b = build_dmera(&DmeraSpec::new(n, Layout::CALIBRATED, angles).unwrap()).simulate();
        prop_assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        let ham = lrtim_hamiltonian(&LrtimParams::new(n, 1.3, 2.2)).unwrap();
        prop_assert!((ham.expectation(&a).unwrap() - ham.expectation(&b).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn cone_sizes_grow_with_m_and_track_the_closed_forms() {
    for n in [8usize, 16, 32] {
        for side in [Side::Left, Side::Right] {
            let mut last = 0;
            for m in 1..=n / 2 {
                let (wires, angles) = structural_counts(Layout::CALIBRATED, n, side, m).unwrap();
                assert!(wires >= last && wires >= m && wires <= n, "{n} {side:?} {m}");
                assert!(angles % 2 == 0);
                let pred = match side {
                    Side::Left => predicted_qubits_left(n, m),
                    Side::Right => predicted_qubits_right(n, m),
                };
                match side {
                    Side::Left => assert_eq!(wires, pred, "{n} {m}"),
                    // the right-side closed form undercounts, by at most one up to M = 6
                    Side::Right => {
                        assert!(wires >= pred, "{n} {m}");
                        if m <= 6 {
                            assert!(wires <= pred + 1, "{n} {m}: {wires} vs {pred}");
                        }
                    }
                }
                last = wires;
            }
        }
    }
}

#[test]
fn cone_spans_every_output_and_only_connected_gates() {
    let spec = DmeraSpec::random(16, Layout::CALIBRATED, 3).unwrap();
    for side in [Side::Left, Side::Right] {
        for m in 1..=6 {
            let cone = causal_cone(&spec, SubsystemSpec::new(side, m).unwrap()).unwrap();
            let mut sorted = cone.output_map.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), m);
            assert!(cone.num_physical() <= 16);
            assert!(cone.source_gates.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
