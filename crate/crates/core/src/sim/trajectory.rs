use rand::{Rng, RngCore};

use super::backend::{Corrections, Simulator};
use super::observable::ObservableSpec;
use super::statevector::StateVector;
use crate::channels::{CircuitNoise, DensePauliChannel, SplChannel};
use crate::clifford::Circuit;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Draw one Pauli error from a forward channel.
pub fn sample_forward_error<R: Rng + ?Sized>(ch: &SplChannel, rng: &mut R) -> Result<PauliString> {
    let mut e = PauliString::identity(ch.n_qubits);
    for t in &ch.product_terms {
        if t.inverted {
            return Err(Error::InvalidParameter("cannot sample a physical error from an inverse term".into()));
        }
        if rng.random::<f64>() < 1.0 - t.w {
            e.mul_assign(&t.pauli);
        }
    }
    for f in &ch.expanded_factors {
        e.mul_assign(&sample_dense_forward(f, rng)?);
    }
    Ok(e)
}

fn sample_dense_forward<R: Rng + ?Sized>(f: &DensePauliChannel, rng: &mut R) -> Result<PauliString> {
    if f.terms.values().any(|&c| c < 0.0) {
        return Err(Error::InvalidParameter("cannot sample a physical error from a quasi-probability".into()));
    }
    let total: f64 = f.trace();
    let mut u = rng.random::<f64>() * total;
    for (p, &c) in &f.terms {
        if u < c {
            return Ok(p.clone());
        }
        u -= c;
    }
    Ok(f.terms.keys().last().cloned().unwrap_or_else(|| PauliString::identity(f.n_qubits)))
}

/// One noisy trajectory: gates layer by layer, with a sampled Pauli error at each noise site.
pub fn run_trajectory<R: Rng + ?Sized>(
    circuit: &Circuit,
    noise: &CircuitNoise,
    corrections: &Corrections,
    rng: &mut R,
) -> Result<StateVector> {
    corrections.check(circuit)?;
    let angles = circuit.signed_angles(corrections.flips.as_ref());
    let mut state = StateVector::zero(circuit.n_qubits)?;
    for pos in 0..=circuit.depth() {
        for c in corrections.at(pos) {
            state.apply_pauli(c);
        }
        for s in noise.sites_at(pos) {
            let e = sample_forward_error(&s.channel, rng)?;
            state.apply_pauli(&e);
        }
        if pos < circuit.depth() {
            for g in &circuit.layers[pos].gates {
                state.apply_gate(g, &angles);
            }
        }
    }
    Ok(state)
}

/// Statevector Monte Carlo: every shot runs its own trajectory.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySim {
    /// Trajectories averaged by `term_expectations`.
    pub trajectories: usize,
    pub seed: u64,
}

impl Default for TrajectorySim {
    fn default() -> Self {
        TrajectorySim { trajectories: 1000, seed: 0 }
    }
}

impl Simulator for TrajectorySim {
    fn term_expectations(
        &self,
        circuit: &Circuit,
        noise: &CircuitNoise,
        corrections: &Corrections,
        paulis: &[PauliString],
    ) -> Result<Vec<f64>> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        let mut acc = vec![0.0; paulis.len()];
        for _ in 0..self.trajectories {
            let s = run_trajectory(circuit, noise, corrections, &mut rng)?;
            for (a, p) in acc.iter_mut().zip(paulis) {
                *a += s.pauli_expectation(p)?;
            }
        }
        Ok(acc.into_iter().map(|a| a / self.trajectories as f64).collect())
    }

    fn estimate(
        &self,
        circuit: &Circuit,
        noise: &CircuitNoise,
        corrections: &Corrections,
        obs: &ObservableSpec,
        shots: u64,
        rng: &mut dyn RngCore,
    ) -> Result<f64> {
        if shots == 0 {
            return Ok(obs.combine(&self.term_expectations(circuit, noise, corrections, &obs.paulis())?));
        }
        let mut values = Vec::with_capacity(obs.terms.len());
        for t in &obs.terms {
            let mut sum = 0i64;
            for _ in 0..shots {
                let s = run_trajectory(circuit, noise, corrections, rng)?;
                let e = s.pauli_expectation(&t.pauli)?;
                sum += if rng.random::<f64>() < (1.0 + e) / 2.0 { 1 } else { -1 };
            }
            values.push(sum as f64 / shots as f64);
        }
        Ok(obs.combine(&values))
    }
}
