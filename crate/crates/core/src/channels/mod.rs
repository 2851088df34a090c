//! Pauli channels: dense maps, sparse Pauli–Lindblad products, noise models.

mod dense;
mod gf2;
mod model;
mod noise;
mod spl;

pub use dense::{convolve, depolarizing_channel, invert_dense, walsh_hadamard, DensePauliChannel, MAX_SPAN_DIM, ZERO_TOL};
pub use gf2::{solve_symplectic, Span};
pub use model::{build_spl_model, gate_channel, linear_topology_paulis, random_pauli_channel, spl_from_paulis, NoiseKind, NoiseModelSpec};
pub use noise::{embed_channel, CircuitNoise, NoiseSite, Placement};
pub use spl::{multiply_by_term, ExpansionStrategy, SplChannel, SplTerm};

/// Channel-level free functions mirroring the method API.
pub fn multiply_dense(a: &DensePauliChannel, b: &DensePauliChannel) -> crate::Result<DensePauliChannel> {
    a.multiply(b)
}

pub fn gamma_dense(c: &DensePauliChannel) -> f64 {
    c.gamma()
}

pub fn gamma_spl(c: &SplChannel) -> crate::Result<f64> {
    c.gamma()
}

pub fn truncate(c: &DensePauliChannel, epsilon: f64) -> (DensePauliChannel, f64) {
    c.truncate(epsilon)
}

pub fn pauli_fidelity(c: &DensePauliChannel, q: &crate::PauliString) -> f64 {
    c.pauli_fidelity(q)
}
