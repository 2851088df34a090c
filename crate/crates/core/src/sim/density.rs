use super::backend::{Corrections, Simulator};
use super::statevector::gate_matrix;
use crate::channels::{CircuitNoise, SplChannel};
use crate::clifford::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{embed, pauli_matrix, CMat};
use crate::pauli::PauliString;

pub const MAX_DENSITY_QUBITS: usize = 6;

/// Full density-matrix evolution; a slow, independent oracle for tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct DensitySim;

fn apply_channel(rho: &CMat, ch: &SplChannel) -> CMat {
    let dense = ch.to_dense();
    let mut out = CMat::zeros(rho.nrows(), rho.ncols());
    for (p, &c) in &dense.terms {
        let pm = pauli_matrix(p);
        out += (&pm * rho * &pm).map(|v| v * c);
    }
    out
}

impl DensitySim {
    pub fn evolve(&self, circuit: &Circuit, noise: &CircuitNoise, corrections: &Corrections) -> Result<CMat> {
        let n = circuit.n_qubits;
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::Capacity(format!("density oracle limited to {MAX_DENSITY_QUBITS} qubits, got {n}")));
        }
        corrections.check(circuit)?;
        let angles = circuit.signed_angles(corrections.flips.as_ref());
        let dim = 1usize << n;
        let mut rho = CMat::zeros(dim, dim);
        rho[(0, 0)] = crate::linalg::ONE;
        for pos in 0..=circuit.depth() {
            for c in corrections.at(pos) {
                let pm = pauli_matrix(c);
                rho = &pm * &rho * &pm;
            }
            for s in noise.sites_at(pos) {
                rho = apply_channel(&rho, &s.channel);
            }
            if pos < circuit.depth() {
                for g in &circuit.layers[pos].gates {
                    let u = embed(&gate_matrix(g, &angles), &g.qubits, n);
                    rho = &u * &rho * u.adjoint();
                }
            }
        }
        Ok(rho)
    }
}

impl Simulator for DensitySim {
    fn term_expectations(
        &self,
        circuit: &Circuit,
        noise: &CircuitNoise,
        corrections: &Corrections,
        paulis: &[PauliString],
    ) -> Result<Vec<f64>> {
        let rho = self.evolve(circuit, noise, corrections)?;
        Ok(paulis.iter().map(|p| (&rho * pauli_matrix(p)).trace().re).collect())
    }
}
