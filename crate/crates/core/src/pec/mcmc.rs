use indexmap::IndexMap;
use rand::Rng;
use serde::Serialize;

use super::estimator::LocalSamplers;
use crate::channels::CircuitNoise;
use crate::clifford::{propagate_in_place, Circuit, SignFlipMask};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Path-sampled estimate of the global inverse.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McmcEstimate {
    pub n_samples: u64,
    /// Signed number of paths ending in each reduced correction.
    pub tallies: IndexMap<PauliString, i64>,
    /// Number of path pairs that cancelled.
    pub interfering: u64,
    /// Surviving fraction of paths, an estimate of γ_global / Π γ_l.
    pub gamma_ratio: f64,
    /// Π γ_l of the local inverses.
    pub gamma_local: f64,
}

impl McmcEstimate {
    pub fn gamma_estimate(&self) -> f64 {
        self.gamma_ratio * self.gamma_local
    }

    /// Estimated coefficient of each reduced correction.
    pub fn coefficients(&self) -> IndexMap<PauliString, f64> {
        let scale = self.gamma_local / self.n_samples as f64;
        self.tallies.iter().map(|(p, &t)| (p.clone(), t as f64 * scale)).collect()
    }
}

/// Sample correction paths layer by layer from the last noisy layer to the start,
/// XI-reduce the resulting global correction and tally it with its sign.
pub fn mcmc_global_estimate<R: Rng + ?Sized>(circuit: &Circuit, noise: &CircuitNoise, n_samples: u64, rng: &mut R) -> Result<McmcEstimate> {
    mcmc_global_estimate_with(circuit, noise, n_samples, true, rng)
}

pub fn mcmc_global_estimate_with<R: Rng + ?Sized>(
    circuit: &Circuit,
    noise: &CircuitNoise,
    n_samples: u64,
    xi_reduce: bool,
    rng: &mut R,
) -> Result<McmcEstimate> {
    if !circuit.is_clifford() {
        return Err(Error::NotClifford("path sampling supports Clifford circuits only".into()));
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be positive".into()));
    }
    let samplers = LocalSamplers::new(noise)?;
    let sites = samplers.sites();
    let mut tallies: IndexMap<PauliString, i64> = IndexMap::new();
    let mut mask = SignFlipMask::default();
    for _ in 0..n_samples {
        let mut global = PauliString::identity(samplers.n_qubits());
        let mut sign = 1i8;
        let mut at = circuit.depth();
        for (pos, s) in sites.iter().rev() {
            propagate_in_place(&mut global, &mut mask, circuit, at, *pos);
            at = *pos;
            let (p, sg) = s.sample(rng);
            global.mul_assign(&p);
            sign *= sg;
        }
        propagate_in_place(&mut global, &mut mask, circuit, at, 0);
        if xi_reduce {
            global = global.xi_reduce();
        }
        *tallies.entry(global).or_insert(0) += sign as i64;
    }
    tallies.retain(|_, t| *t != 0);
    let surviving: u64 = tallies.values().map(|t| t.unsigned_abs()).sum();
    Ok(McmcEstimate {
        n_samples,
        tallies,
        interfering: (n_samples - surviving) / 2,
        gamma_ratio: surviving as f64 / n_samples as f64,
        gamma_local: samplers.gamma_total,
    })
}
