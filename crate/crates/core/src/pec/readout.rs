use rand::Rng;
use serde::{Deserialize, Serialize};

use super::global::{build_global_inverse, GlobalInverse, GlobalInverseOptions};
use crate::channels::{CircuitNoise, DensePauliChannel};
use crate::clifford::Circuit;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

/// Tensor-product readout errors: per qubit (P(0→1), P(1→0)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReadoutModel {
    pub per_qubit: Vec<(f64, f64)>,
}

impl ReadoutModel {
    pub fn new(per_qubit: Vec<(f64, f64)>) -> Result<ReadoutModel> {
        for (q, &(e, h)) in per_qubit.iter().enumerate() {
            for v in [e, h] {
                if !(0.0..0.5).contains(&v) {
                    return Err(Error::InvalidParameter(format!("readout error {v} on qubit {q} outside [0, 1/2)")));
                }
            }
        }
        Ok(ReadoutModel { per_qubit })
    }

    /// Flip probabilities drawn uniformly from `[lo, hi)` per qubit and direction.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, lo: f64, hi: f64, rng: &mut R) -> Result<ReadoutModel> {
        ReadoutModel::new((0..n_qubits).map(|_| (rng.random_range(lo..hi), rng.random_range(lo..hi))).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    /// Column-stochastic matrix `A[measured][prepared]`.
    pub fn assignment_matrix(&self, q: usize) -> [[f64; 2]; 2] {
        let (e, h) = self.per_qubit[q];
        [[1.0 - e, h], [e, 1.0 - h]]
    }

    /// Symmetric flip probability after X-twirling, `(ε+η)/2`.
    pub fn twirled_flip(&self, q: usize) -> f64 {
        let (e, h) = self.per_qubit[q];
        (e + h) / 2.0
    }

    pub fn twirled_flips(&self) -> Vec<f64> {
        (0..self.n_qubits()).map(|q| self.twirled_flip(q)).collect()
    }
}

/// Randomized X insertion before measurement, undone classically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwirlProtocol {
    /// Probability of inserting X on each qubit.
    pub insert_probability: f64,
    /// Recorded bits are flipped back whenever X was inserted.
    pub classical_flip_back: bool,
}

/// Per-qubit X channels `{I: 1−p_x, X: p_x}` and the twirling protocol producing them.
pub fn twirl_readout(model: &ReadoutModel) -> Result<(Vec<DensePauliChannel>, TwirlProtocol)> {
    let model = ReadoutModel::new(model.per_qubit.clone())?;
    let channels = (0..model.n_qubits())
        .map(|q| {
            let px = model.twirled_flip(q);
            DensePauliChannel::from_terms(1, [(PauliString::identity(1), 1.0 - px), (PauliString::single(1, 0, Letter::X), px)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((channels, TwirlProtocol { insert_probability: 0.5, classical_flip_back: true }))
}

/// Monte-Carlo assignment matrix of one twirled qubit, `A[recorded][prepared]`.
pub fn simulate_twirled_assignment<R: Rng + ?Sized>(model: &ReadoutModel, q: usize, shots: u64, rng: &mut R) -> [[f64; 2]; 2] {
    let (e, h) = model.per_qubit[q];
    let mut p1 = [0.0; 2];
    for (prepared, p) in p1.iter_mut().enumerate() {
        let mut ones = 0u64;
        for _ in 0..shots {
            let twirl = rng.random_bool(0.5);
            let state = prepared ^ twirl as usize;
            let flip = if state == 0 { e } else { h };
            let measured = state ^ rng.random_bool(flip) as usize;
            ones += (measured ^ twirl as usize) as u64;
        }
        *p = ones as f64 / shots as f64;
    }
    [[1.0 - p1[0], 1.0 - p1[1]], p1]
}

/// Fused inverse of the readout X channels alone, propagated from the measurement boundary.
pub fn propagate_measurement_errors(circuit: &Circuit, flips: &[f64], opts: &GlobalInverseOptions) -> Result<GlobalInverse> {
    let noise = CircuitNoise::noiseless(circuit).with_readout_flips(flips)?;
    build_global_inverse(circuit, &noise, opts)
}
