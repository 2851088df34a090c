use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::global::{build_global_inverse, GlobalInverse, GlobalInverseOptions, GlobalSampler};
use super::sampling::ProductSampler;
use crate::channels::CircuitNoise;
use crate::clifford::Circuit;
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::sim::{Corrections, ObservableSpec, Simulator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MitigationEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub gamma_total: f64,
    pub n_instances: usize,
    pub shots_per_instance: u64,
}

/// Independent stream for instance `i` of a run seeded with `master`.
pub fn instance_rng(master: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(i);
    rng
}

/// Mean and standard error of per-instance values.
pub fn summarize(values: &[f64], gamma_total: f64, shots: u64) -> MitigationEstimate {
    let m = values.len();
    let mean = values.iter().sum::<f64>() / m as f64;
    let stderr = if m > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        (var / m as f64).sqrt()
    } else {
        0.0
    };
    MitigationEstimate { mean, stderr, gamma_total, n_instances: m, shots_per_instance: shots }
}

#[allow(clippy::too_many_arguments)]
fn run_instances<S, F>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    m: usize,
    shots: u64,
    master: u64,
    draw: F,
) -> Result<Vec<f64>>
where
    S: Simulator + ?Sized,
    F: Fn(&mut ChaCha8Rng) -> (Corrections, f64) + Sync,
{
    if m == 0 {
        return Err(Error::InvalidParameter("at least one correction circuit is required".into()));
    }
    obs.check(circuit.n_qubits)?;
    (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(master, i);
            let (corr, weight) = draw(&mut rng);
            Ok(weight * sim.estimate(circuit, noise, &corr, obs, shots, &mut rng)?)
        })
        .collect()
}

/// Precomputed per-site samplers for plain PEC.
#[derive(Debug, Clone)]
pub struct LocalSamplers {
    sites: Vec<(usize, ProductSampler)>,
    n_qubits: usize,
    pub gamma_total: f64,
}

impl LocalSamplers {
    pub fn new(noise: &CircuitNoise) -> Result<LocalSamplers> {
        let mut sites = Vec::with_capacity(noise.sites.len());
        let mut gamma_total = 1.0;
        for s in &noise.sites {
            let sampler = ProductSampler::new(&s.channel.inverse()?)?;
            gamma_total *= sampler.gamma();
            sites.push((s.position, sampler));
        }
        Ok(LocalSamplers { sites, n_qubits: noise.n_qubits, gamma_total })
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// One correction per noise site, inserted right where the site acts.
    pub fn draw<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> (Corrections, i8) {
        let mut inserts = Vec::with_capacity(self.sites.len());
        let mut sign = 1i8;
        for (pos, s) in &self.sites {
            let (p, sg) = s.sample(rng);
            sign *= sg;
            if !p.is_identity() {
                inserts.push((*pos, p));
            }
        }
        (Corrections { inserts, flips: None }, sign)
    }

    /// Sites visited from the last to the first, for path sampling.
    pub(crate) fn sites(&self) -> &[(usize, ProductSampler)] {
        &self.sites
    }

    pub(crate) fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

/// Plain PEC: one sampled inverse correction per noisy layer.
pub fn run_pec<S, R>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    m: usize,
    shots: u64,
    rng: &mut R,
) -> Result<MitigationEstimate>
where
    S: Simulator + ?Sized,
    R: RngCore + ?Sized,
{
    let samplers = LocalSamplers::new(noise)?;
    run_pec_with(sim, circuit, noise, obs, &samplers, m, shots, rng.next_u64())
}

#[allow(clippy::too_many_arguments)]
pub fn run_pec_with<S: Simulator + ?Sized>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    samplers: &LocalSamplers,
    m: usize,
    shots: u64,
    seed: u64,
) -> Result<MitigationEstimate> {
    let g = samplers.gamma_total;
    let values = run_instances(sim, circuit, noise, obs, m, shots, seed, |rng| {
        let (corr, sign) = samplers.draw(rng);
        (corr, g * sign as f64)
    })?;
    Ok(summarize(&values, g, shots))
}

/// pPEC: sample from the fused global inverse and apply the correction at its boundary.
#[allow(clippy::too_many_arguments)]
pub fn run_ppec<S, R>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    m: usize,
    shots: u64,
    opts: &GlobalInverseOptions,
    rng: &mut R,
) -> Result<MitigationEstimate>
where
    S: Simulator + ?Sized,
    R: RngCore + ?Sized,
{
    let global = build_global_inverse(circuit, noise, opts)?;
    run_ppec_with(sim, circuit, noise, obs, &global, m, shots, rng.next_u64())
}

#[allow(clippy::too_many_arguments)]
pub fn run_ppec_with<S: Simulator + ?Sized>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    global: &GlobalInverse,
    m: usize,
    shots: u64,
    seed: u64,
) -> Result<MitigationEstimate> {
    let sampler = global.sampler()?;
    run_ppec_sampled(sim, circuit, noise, obs, &sampler, global.position(circuit), m, shots, seed)
}

#[allow(clippy::too_many_arguments)]
pub fn run_ppec_sampled<S: Simulator + ?Sized>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    sampler: &GlobalSampler,
    position: usize,
    m: usize,
    shots: u64,
    seed: u64,
) -> Result<MitigationEstimate> {
    let g = sampler.gamma();
    let values = run_instances(sim, circuit, noise, obs, m, shots, seed, |rng| {
        let s = sampler.sample(rng);
        (GlobalSampler::corrections(&s, position), g * s.sign as f64)
    })?;
    Ok(summarize(&values, g, shots))
}

/// Unmitigated noisy estimate with the same shot budget (`m` repetitions).
pub fn run_unmitigated<S: Simulator + ?Sized>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    m: usize,
    shots: u64,
    seed: u64,
) -> Result<MitigationEstimate> {
    let values = run_instances(sim, circuit, noise, obs, m, shots, seed, |_| (Corrections::none(), 1.0))?;
    Ok(summarize(&values, 1.0, shots))
}

/// Exact mitigated expectation: sum over every fused correction weighted by its coefficient.
pub fn exact_mitigated<S: Simulator + ?Sized>(
    sim: &S,
    circuit: &Circuit,
    noise: &CircuitNoise,
    obs: &ObservableSpec,
    global: &GlobalInverse,
) -> Result<f64> {
    if global.product.is_some() {
        return Err(Error::Capacity("exact enumeration needs a fused global inverse".into()));
    }
    let pos = global.position(circuit);
    let paulis: Vec<PauliString> = obs.paulis();
    let mut total = 0.0;
    for ((p, mask), &c) in &global.corrections {
        let corr = Corrections { inserts: vec![(pos, p.clone())], flips: mask.any().then(|| mask.clone()) };
        let e = sim.term_expectations(circuit, noise, &corr, &paulis)?;
        total += c * obs.combine(&e);
    }
    Ok(total)
}
