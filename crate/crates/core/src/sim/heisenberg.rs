use super::backend::{Corrections, Simulator};
use crate::channels::CircuitNoise;
use crate::clifford::{heisenberg_signed, Circuit};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Exact expectations for Clifford circuits under Pauli noise by propagating
/// each observable string backwards from the measurement.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeisenbergSim;

impl HeisenbergSim {
    pub fn expectation(&self, circuit: &Circuit, noise: &CircuitNoise, corrections: &Corrections, obs: &PauliString) -> Result<f64> {
        if !circuit.is_clifford() {
            return Err(Error::NotClifford("circuit contains rotations".into()));
        }
        corrections.check(circuit)?;
        let mut o = obs.clone();
        let mut value = 1.0;
        let mut site = noise.sites.len();
        for pos in (0..=circuit.depth()).rev() {
            while site > 0 && noise.sites[site - 1].position >= pos {
                site -= 1;
                let s = &noise.sites[site];
                if s.position == pos {
                    value *= s.channel.pauli_fidelity(&o);
                }
            }
            for c in corrections.at(pos) {
                if !c.commutes_unchecked(&o) {
                    value = -value;
                }
            }
            if pos > 0 {
                for g in &circuit.layers[pos - 1].gates {
                    if heisenberg_signed(g, &mut o) < 0 {
                        value = -value;
                    }
                }
            }
        }
        Ok(if o.is_z_type() { value } else { 0.0 })
    }
}

impl Simulator for HeisenbergSim {
    fn term_expectations(
        &self,
        circuit: &Circuit,
        noise: &CircuitNoise,
        corrections: &Corrections,
        paulis: &[PauliString],
    ) -> Result<Vec<f64>> {
        paulis.iter().map(|p| self.expectation(circuit, noise, corrections, p)).collect()
    }
}
