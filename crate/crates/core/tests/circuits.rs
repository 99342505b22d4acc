//! End-to-end circuit checks: parsing, running, and the benchmark
//! generators against the dense oracle.

mod common;

use common::*;
use mddsim::{parse, run, BasisIndex, RunOptions};

const THREE_QUDIT_CIRCUIT: &str = "\
qudits 2 3 4
gate h target=1
gate x target=2 ctrl=1@1
gate x target=0 ctrl=1@1
measure all
";

#[test]
fn parsed_circuit_matches_dense_simulation() {
    let circuit = parse(THREE_QUDIT_CIRCUIT).unwrap();
    let outcome = run(&circuit, &RunOptions::default()).unwrap();
    assert_eq!(outcome.op_count, 3);
    let got = reconstruct_vector(&outcome.package, outcome.final_state);
    let expected = simulate_dense(&circuit);
    assert!(max_deviation(&got, &expected) < 1e-12);
}

#[test]
fn ghz_small_instances_match_the_analytic_state() {
    for n in 2..=4 {
        let circuit = mddsim::ghz_circuit(n, 3).unwrap();
        let outcome = run(&circuit, &RunOptions::default()).unwrap();
        let register = outcome.package.register();
        let dim = register.total_dimension().unwrap();
        let s = 1.0 / 3.0f64.sqrt();
        for idx in 0..dim {
            let b = BasisIndex::from_dense(register, idx);
            let first = b.digit(0);
            let diagonal = b.digits().iter().all(|&d| d == first);
            let expected = if diagonal { c(s, 0.0) } else { c(0.0, 0.0) };
            let got = outcome
                .package
                .get_amplitude(outcome.final_state, &b)
                .unwrap();
            assert!(
                (got - expected).norm() < 1e-12,
                "n={n}, index {idx}: {got} vs {expected}"
            );
        }
    }
}

#[test]
fn ghz_node_count_follows_the_linear_law() {
    for n in [2, 5, 10, 17] {
        let circuit = mddsim::ghz_circuit(n, 3).unwrap();
        let outcome = run(&circuit, &RunOptions::default()).unwrap();
        assert_eq!(outcome.stats.node_count, 3 * n - 1, "n={n}");
    }
}

#[test]
fn w_state_two_qubits_is_the_bell_like_state() {
    let circuit = mddsim::w_state_circuit(&[2, 2]).unwrap();
    let outcome = run(&circuit, &RunOptions::default()).unwrap();
    let got = reconstruct_vector(&outcome.package, outcome.final_state);
    let s = 1.0 / 2.0f64.sqrt();
    let expected = vec![c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)];
    assert!(max_deviation(&got, &expected) < 1e-12);
}

#[test]
fn w_state_mixed_dims_has_one_hot_support() {
    let dims = [2usize, 2, 3, 3];
    let circuit = mddsim::w_state_circuit(&dims).unwrap();
    let outcome = run(&circuit, &RunOptions::default()).unwrap();
    let register = outcome.package.register();
    let dim = register.total_dimension().unwrap();
    let amp = 0.5;
    for idx in 0..dim {
        let b = BasisIndex::from_dense(register, idx);
        let ones: usize = b.digits().iter().filter(|&&d| d == 1).count();
        let high: usize = b.digits().iter().filter(|&&d| d > 1).count();
        let expected = if ones == 1 && high == 0 && b.digits().iter().sum::<usize>() == 1 {
            c(amp, 0.0)
        } else {
            c(0.0, 0.0)
        };
        let got = outcome
            .package
            .get_amplitude(outcome.final_state, &b)
            .unwrap();
        assert!(
            (got - expected).norm() < 1e-10,
            "index {idx}: {got} vs {expected}"
        );
    }
    // Matches the dense oracle as well.
    let expected = simulate_dense(&circuit);
    let got = reconstruct_vector(&outcome.package, outcome.final_state);
    assert!(max_deviation(&got, &expected) < 1e-12);
}

#[test]
fn generated_circuits_round_trip_and_replay_identically() {
    let circuit = mddsim::random_circuit(&[2, 3, 2], 100, 12).unwrap();
    let reparsed = parse(&circuit.to_string()).unwrap();
    assert_eq!(circuit, reparsed);

    let opts = RunOptions {
        seed: 5,
        samples: 50,
        ..Default::default()
    };
    let a = run(&circuit, &opts).unwrap();
    let b = run(&reparsed, &opts).unwrap();
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.stats, b.stats);
    assert_eq!(a.op_count, b.op_count);
}

#[test]
fn random_circuit_matches_dense_oracle() {
    for seed in [1u64, 2, 3] {
        let circuit = mddsim::random_circuit(&[3, 2, 2], 150, seed).unwrap();
        let outcome = run(&circuit, &RunOptions::default()).unwrap();
        let got = reconstruct_vector(&outcome.package, outcome.final_state);
        let expected = simulate_dense(&circuit);
        assert!(
            max_deviation(&got, &expected) < 1e-9,
            "seed {seed} deviates"
        );
    }
}

#[test]
fn two_thousand_gates_on_two_qutrits_match_dense_oracle() {
    let circuit = mddsim::random_circuit(&[3, 3], 2000, 6).unwrap();
    let outcome = run(&circuit, &RunOptions::default()).unwrap();
    let got = reconstruct_vector(&outcome.package, outcome.final_state);
    let expected = simulate_dense(&circuit);
    assert!(max_deviation(&got, &expected) < 1e-9);
}

#[test]
fn w_state_node_count_grows_linearly() {
    for n in [4usize, 8, 16] {
        let dims: Vec<usize> = (0..n).map(|i| [2, 3, 5][i % 3]).collect();
        let circuit = mddsim::w_state_circuit(&dims).unwrap();
        let outcome = run(&circuit, &RunOptions::default()).unwrap();
        assert!(
            outcome.stats.node_count <= 4 * n,
            "n={n}: {} nodes",
            outcome.stats.node_count
        );
    }
}

#[test]
fn final_states_satisfy_structural_invariants() {
    let circuits = vec![
        mddsim::ghz_circuit(6, 3).unwrap(),
        mddsim::w_state_circuit(&[3, 2, 5, 2]).unwrap(),
        mddsim::random_circuit(&[2, 3, 2], 200, 77).unwrap(),
    ];
    for circuit in circuits {
        let outcome = run(&circuit, &RunOptions::default()).unwrap();
        outcome
            .package
            .check_consistency(outcome.final_state)
            .unwrap();
        outcome.package.check_unique_table().unwrap();
    }
}
