use rand::RngCore;
use rand_distr::{Binomial, Distribution};

use super::observable::ObservableSpec;
use crate::channels::CircuitNoise;
use crate::clifford::{Circuit, SignFlipMask};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Pauli insertions (at layer positions) plus rotation sign flips applied to one circuit instance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corrections {
    pub inserts: Vec<(usize, PauliString)>,
    pub flips: Option<SignFlipMask>,
}

impl Corrections {
    pub fn none() -> Corrections {
        Corrections::default()
    }

    pub fn at_start(p: PauliString, flips: Option<SignFlipMask>) -> Corrections {
        Corrections { inserts: vec![(0, p)], flips }
    }

    pub fn at(&self, position: usize) -> impl Iterator<Item = &PauliString> {
        self.inserts.iter().filter(move |(q, _)| *q == position).map(|(_, p)| p)
    }

    pub fn check(&self, circuit: &Circuit) -> Result<()> {
        for (pos, p) in &self.inserts {
            if *pos > circuit.depth() {
                return Err(Error::LayerOutOfRange { index: *pos, len: circuit.depth() });
            }
            if p.n_qubits() != circuit.n_qubits {
                return Err(Error::DimensionMismatch(circuit.n_qubits, p.n_qubits()));
            }
        }
        Ok(())
    }
}

/// Sample a ±1-valued Pauli measurement `shots` times given its mean.
pub fn sample_pauli_mean(mean: f64, shots: u64, rng: &mut dyn RngCore) -> f64 {
    if shots == 0 {
        return mean;
    }
    let p = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
    let ones = Binomial::new(shots, p).expect("valid binomial").sample(rng);
    2.0 * ones as f64 / shots as f64 - 1.0
}

pub trait Simulator: Sync {
    /// Noisy expectation of each Pauli string.
    fn term_expectations(
        &self,
        circuit: &Circuit,
        noise: &CircuitNoise,
        corrections: &Corrections,
        paulis: &[PauliString],
    ) -> Result<Vec<f64>>;

    /// Estimate an observable; each term gets `shots` measurements (0 = exact).
    fn estimate(
        &self,
        circuit: &Circuit,
        noise: &CircuitNoise,
        corrections: &Corrections,
        obs: &ObservableSpec,
        shots: u64,
        rng: &mut dyn RngCore,
    ) -> Result<f64> {
        let exact = self.term_expectations(circuit, noise, corrections, &obs.paulis())?;
        let sampled: Vec<f64> = exact.iter().map(|&e| sample_pauli_mean(e, shots, rng)).collect();
        Ok(obs.combine(&sampled))
    }
}
