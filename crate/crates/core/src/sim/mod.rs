//! Simulation backends, observables and circuit builders.

mod backend;
mod builders;
mod density;
mod heisenberg;
mod observable;
mod pauli_vector;
mod statevector;
mod trajectory;

pub use backend::{sample_pauli_mean, Corrections, Simulator};
pub use builders::{
    append_basis_change, build_graph_state_circuit, build_grouping_circuit, build_ising_trotter, decompose_swaps, lattice_edges,
    output_stabilizer, random_clifford_circuit, route_linear, GraphStateOptions, LatticeLayout, RouteOptions, Topology, TwoQubitPattern,
};
pub use density::DensitySim;
pub use heisenberg::HeisenbergSim;
pub use observable::{ObservableSpec, ObservableTerm};
pub use pauli_vector::{PauliVector, PauliVectorSim};
pub use statevector::{gate_matrix, rotation_matrix, StateVector, MAX_STATEVECTOR_QUBITS};
pub use trajectory::{run_trajectory, sample_forward_error, TrajectorySim};
