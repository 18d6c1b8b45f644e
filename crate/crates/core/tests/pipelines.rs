use qdmera::dmera::{build_dmera, causal_cone, Circuit, DmeraSpec, Layout, Side, SubsystemSpec};
use qdmera::lrtim::{exact_ground_state, exact_subsystem_entropy, lrtim_hamiltonian, LrtimParams};
use qdmera::noise::{NoiseModel, SampledVqse};
use qdmera::qsim::{hermitian_eigenvalues, trace_distance, von_neumann_entropy};
use qdmera::variational::{
    optimize_angles, vqe_optimize, vqse_diagonalize, Checkpoint, Method, OptimizerConfig, VqseCost,
};

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[test]
fn lrtim_reference_values() {
    let ground = |h: f64| {
        let ham = lrtim_hamiltonian(&LrtimParams::new(8, h, 2.2)).unwrap();
        exact_ground_state(&ham).unwrap()
    };
    let (e, psi) = ground(0.4);
    assert!((e - -2.576552013079137).abs() < 1e-10);
    let s4 = exact_subsystem_entropy(&psi, SubsystemSpec::new(Side::Left, 4).unwrap()).unwrap();
    assert!((s4 - 0.686598765277353).abs() < 1e-10, "{s4}");
    let (e, _) = ground(2.3);
    assert!((e - -9.307875066902653).abs() < 1e-10);

    // energy is non-increasing along the default grid
    let energies: Vec<f64> = (0..20).map(|i| ground(0.4 + 1.9 * i as f64 / 19.0).0).collect();
    assert!(energies.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn random_dmera_small_cones_are_diagonalized() {
    for seed in 0..3 {
        let spec = DmeraSpec::random(16, Layout::CALIBRATED, seed).unwrap();
        let full = build_dmera(&spec).simulate();
        for side in [Side::Left, Side::Right] {
            let sub = SubsystemSpec::new(side, 2).unwrap();
            let exact = full.partial_trace(&sub.wires(16).unwrap()).unwrap();
            let rho = causal_cone(&spec, sub).unwrap().reduced_state();
            assert!(trace_distance(&exact, &rho).unwrap() < 1e-10);
            let cfg = OptimizerConfig { restarts: 5, seed, ..Default::default() };
            let (_, est, _) = vqse_diagonalize(&rho, &VqseCost::linear(2), &cfg).unwrap();
            assert!((est.entropy - von_neumann_entropy(&exact)).abs() < 1e-6);
            let eig = sorted_desc(hermitian_eigenvalues(&exact));
            let td: f64 = est.lambdas.iter().zip(&eig).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
            assert!(td < 1e-6);
            assert!(est.entropy <= 2.0 * std::f64::consts::LN_2 + 1e-12);
        }
    }
}

#[test]
fn vqe_reaches_the_target_at_unit_field() {
    let ham = lrtim_hamiltonian(&LrtimParams::new(8, 1.0, 2.2)).unwrap();
    let (e0, _) = exact_ground_state(&ham).unwrap();
    let cfg = OptimizerConfig { restarts: 2, seed: 11, ..Default::default() };
    let (spec, e, rep) = vqe_optimize(8, Layout::CALIBRATED, &ham, &cfg).unwrap();
    assert!(e >= e0 - 1e-10);
    assert!(((e - e0) / e0).abs() < 5e-3, "{e} vs {e0}");
    assert!(rep.history.windows(2).all(|w| w[1] <= w[0]));

    // the same run again is bit-identical
    let (spec2, e2, _) = vqe_optimize(8, Layout::CALIBRATED, &ham, &cfg).unwrap();
    assert_eq!(e.to_bits(), e2.to_bits());
    assert_eq!(spec, spec2);

    // and its checkpoint restores the same energy
    let ck = Checkpoint { num_qubits: 8, m: None, side: None, seed: 11, angles: spec.flat_angles() };
    let back = Checkpoint::from_text(&ck.to_text()).unwrap();
    let restored = DmeraSpec::from_flat(8, Layout::CALIBRATED, &back.angles).unwrap();
    assert_eq!(restored, spec);
}

#[test]
fn cone_circuits_survive_the_text_format() {
    let spec = DmeraSpec::random(16, Layout::CALIBRATED, 9).unwrap();
    let cone = causal_cone(&spec, SubsystemSpec::new(Side::Right, 3).unwrap()).unwrap();
    let parsed = Circuit::from_text(&cone.circuit.to_text()).unwrap();
    assert_eq!(parsed, cone.circuit);
    let a = parsed.simulate().partial_trace(&cone.output_map).unwrap();
    assert!(trace_distance(&a, &cone.reduced_state()).unwrap() < 1e-14);
}

#[test]
fn noisy_estimates_are_biased_up_and_mitigation_helps() {
    let spec = DmeraSpec::random(8, Layout::CALIBRATED, 2).unwrap();
    let cone = causal_cone(&spec, SubsystemSpec::new(Side::Left, 2).unwrap()).unwrap();
    let exact = von_neumann_entropy(&cone.reduced_state());
    let model = NoiseModel::default();
    let noisy = SampledVqse::new(&cone, &model, VqseCost::linear(2), 1 << 14, 5).unwrap();
    let cfg = OptimizerConfig {
        method: Method::SimultaneousPerturbation,
        max_iterations: 200,
        patience: 200,
        seed: 5,
        ..Default::default()
    };
    let (angles, _) = optimize_angles(&noisy, &cfg, None).unwrap();
    let raw = noisy.spectrum(&angles, false).unwrap().entropy;
    let mitigated = noisy.spectrum(&angles, true).unwrap().entropy;
    assert!(raw > exact);
    assert!((mitigated - exact).abs() < (raw - exact).abs());
}
