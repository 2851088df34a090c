use super::backend::{Corrections, Simulator};
use crate::channels::CircuitNoise;
use crate::clifford::{schrodinger_signed, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub const MAX_PAULI_VECTOR_QUBITS: usize = 8;

/// Exact density evolution in the Pauli basis: ρ = 2⁻ⁿ Σ r_P P.
///
/// Handles rotations, so it serves the non-Clifford experiments at small n.
#[derive(Debug, Clone, Copy, Default)]
pub struct PauliVectorSim;

fn index(p: &PauliString) -> usize {
    let (x, z) = p.masks();
    (x | (z << p.n_qubits())) as usize
}

fn from_index(n: usize, i: usize) -> PauliString {
    let mask = (1usize << n) - 1;
    PauliString::from_masks(n, (i & mask) as u64, (i >> n) as u64)
}

pub struct PauliVector {
    pub n_qubits: usize,
    pub r: Vec<f64>,
    basis: Vec<PauliString>,
}

impl PauliVector {
    pub fn zero_state(n_qubits: usize) -> Result<PauliVector> {
        if n_qubits > MAX_PAULI_VECTOR_QUBITS {
            return Err(Error::Capacity(format!("Pauli-vector simulator limited to {MAX_PAULI_VECTOR_QUBITS} qubits, got {n_qubits}")));
        }
        let dim = 1usize << (2 * n_qubits);
        let basis: Vec<PauliString> = (0..dim).map(|i| from_index(n_qubits, i)).collect();
        let r = basis.iter().map(|p| if p.is_z_type() { 1.0 } else { 0.0 }).collect();
        Ok(PauliVector { n_qubits, r, basis })
    }

    pub fn apply_gate(&mut self, g: &Gate, angles: &[f64]) {
        let mut out = vec![0.0; self.r.len()];
        match g.rotation {
            None => {
                for (i, p) in self.basis.iter().enumerate() {
                    if self.r[i] == 0.0 {
                        continue;
                    }
                    let mut q = p.clone();
                    let s = schrodinger_signed(g, &mut q);
                    out[index(&q)] += s as f64 * self.r[i];
                }
            }
            Some(rot) => {
                let theta = angles[rot.angle_id];
                let a = PauliString::single(self.n_qubits, g.qubits[0], rot.axis.letter());
                let (cs, sn) = (theta.cos(), theta.sin());
                for (i, p) in self.basis.iter().enumerate() {
                    let v = self.r[i];
                    if v == 0.0 {
                        continue;
                    }
                    if p.commutes_unchecked(&a) {
                        out[i] += v;
                    } else {
                        // R P R† = cos θ P + sin θ (i P A)
                        let (q, k) = p.mul_with_phase(&a);
                        let s = if (k + 1) % 4 == 0 { 1.0 } else { -1.0 };
                        out[i] += cs * v;
                        out[index(&q)] += s * sn * v;
                    }
                }
            }
        }
        self.r = out;
    }

    pub fn apply_fidelities(&mut self, f: &[f64]) {
        for (r, f) in self.r.iter_mut().zip(f) {
            *r *= f;
        }
    }

    pub fn apply_pauli(&mut self, c: &PauliString) {
        for (r, p) in self.r.iter_mut().zip(&self.basis) {
            if !p.commutes_unchecked(c) {
                *r = -*r;
            }
        }
    }

    pub fn expectation(&self, p: &PauliString) -> f64 {
        self.r[index(p)]
    }
}

impl PauliVectorSim {
    /// Final Pauli vector of the noisy, corrected circuit.
    pub fn evolve(&self, circuit: &Circuit, noise: &CircuitNoise, corrections: &Corrections) -> Result<PauliVector> {
        corrections.check(circuit)?;
        let angles = circuit.signed_angles(corrections.flips.as_ref());
        let mut state = PauliVector::zero_state(circuit.n_qubits)?;
        for pos in 0..=circuit.depth() {
            for c in corrections.at(pos) {
                state.apply_pauli(c);
            }
            for s in noise.sites_at(pos) {
                let f: Vec<f64> = state.basis.iter().map(|p| s.channel.pauli_fidelity(p)).collect();
                state.apply_fidelities(&f);
            }
            if pos < circuit.depth() {
                for g in &circuit.layers[pos].gates {
                    state.apply_gate(g, &angles);
                }
            }
        }
        Ok(state)
    }
}

impl Simulator for PauliVectorSim {
    fn term_expectations(
        &self,
        circuit: &Circuit,
        noise: &CircuitNoise,
        corrections: &Corrections,
        paulis: &[PauliString],
    ) -> Result<Vec<f64>> {
        let state = self.evolve(circuit, noise, corrections)?;
        Ok(paulis.iter().map(|p| state.expectation(p)).collect())
    }
}
