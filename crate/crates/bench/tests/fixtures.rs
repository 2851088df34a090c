use pmit_bench::{depolarized_circuit, random_paulis, spl_circuit};

#[test]
fn fixtures_are_deterministic_and_sized() {
    assert_eq!(random_paulis(16, 8, 1), random_paulis(16, 8, 1));
    assert_ne!(random_paulis(16, 8, 1), random_paulis(16, 8, 2));

    let (circuit, noise) = spl_circuit(6, 5, 0.996, 3);
    assert_eq!(circuit.n_qubits, 6);
    assert_eq!(circuit.n_noisy_layers(), 5);
    assert_eq!(noise.sites.len(), 5);

    let (a, _) = depolarized_circuit(4, 3, 0.02, 9);
    let (b, _) = depolarized_circuit(4, 3, 0.02, 9);
    assert_eq!(a, b);
}
