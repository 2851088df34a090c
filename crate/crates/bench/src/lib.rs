//! Shared fixtures for the criterion benches.

use pmit_core::channels::{build_spl_model, CircuitNoise, NoiseModelSpec, Placement};
use pmit_core::sim::{random_clifford_circuit, TwoQubitPattern};
use pmit_core::{Circuit, PauliString};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_paulis(n_qubits: usize, count: usize, seed: u64) -> Vec<PauliString> {
    let mut rng = rng(seed);
    (0..count).map(|_| PauliString::random(n_qubits, &mut rng)).collect()
}

/// Random nearest-neighbour Clifford circuit with layer-level SPL noise of fidelity `f`.
pub fn spl_circuit(n_qubits: usize, depth: usize, f: f64, seed: u64) -> (Circuit, CircuitNoise) {
    let circuit = random_clifford_circuit(n_qubits, depth, TwoQubitPattern::NearestNeighbour, &mut rng(seed)).expect("valid circuit");
    let channel = build_spl_model(n_qubits, &NoiseModelSpec::spl(f)).expect("valid model");
    let noise = CircuitNoise::layer_level(&circuit, &channel, Placement::Before).expect("noise attaches");
    (circuit, noise)
}

/// Random Clifford circuit with one depolarizing channel per two-qubit gate.
pub fn depolarized_circuit(n_qubits: usize, depth: usize, p: f64, seed: u64) -> (Circuit, CircuitNoise) {
    let mut rng = rng(seed);
    let circuit = random_clifford_circuit(n_qubits, depth, TwoQubitPattern::RandomPairs, &mut rng).expect("valid circuit");
    let noise = CircuitNoise::gate_level(&circuit, &NoiseModelSpec::depolarizing(p), Placement::Before, &mut rng).expect("noise attaches");
    (circuit, noise)
}
