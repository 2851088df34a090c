mod distribution;
mod gamma;
mod ising;
mod mcmc;
mod scaling;

pub use distribution::distribution;
pub use gamma::{mbqc_gamma, vqe_grouping};
pub use ising::ising_magnetization;
pub use mcmc::mcmc_convergence;
pub use scaling::gamma_scaling;

use pmit_core::channels::{build_spl_model, CircuitNoise, NoiseKind, NoiseModelSpec, Placement};
use pmit_core::sim::{ObservableSpec, ObservableTerm};
use pmit_core::Circuit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::Report;

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    match config {
        ExperimentConfig::GammaScaling(c) | ExperimentConfig::SplDepthSweep(c) => gamma_scaling(c),
        ExperimentConfig::Distribution(c) => distribution(c),
        ExperimentConfig::VqeGrouping(c) => vqe_grouping(c),
        ExperimentConfig::MbqcGamma(c) => mbqc_gamma(c),
        ExperimentConfig::IsingMagnetization(c) => ising_magnetization(c),
        ExperimentConfig::McmcConvergence(c) => mcmc_convergence(c),
    }
}

/// Layer-level SPL noise, or one gate channel per two-qubit gate. A `seed` in the
/// spec fixes randomly drawn gate channels independently of `rng`.
pub(crate) fn attach_noise<R: Rng + ?Sized>(
    circuit: &Circuit,
    spec: &NoiseModelSpec,
    placement: Placement,
    rng: &mut R,
) -> Result<CircuitNoise> {
    Ok(match spec.kind {
        NoiseKind::SplLinearTopology => CircuitNoise::layer_level(circuit, &build_spl_model(circuit.n_qubits, spec)?, placement)?,
        _ => match spec.seed {
            Some(s) => CircuitNoise::gate_level(circuit, spec, placement, &mut ChaCha8Rng::seed_from_u64(s))?,
            None => CircuitNoise::gate_level(circuit, spec, placement, rng)?,
        },
    })
}

pub(crate) fn observable(terms: &[ObservableTerm]) -> Result<ObservableSpec> {
    Ok(ObservableSpec::new(terms.iter().map(|t| (t.coef, t.pauli.clone())).collect())?)
}

/// Sample mean and unbiased variance.
pub(crate) fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}
