use pmit_core::pec::{build_global_inverse, instance_rng, mcmc_global_estimate_with, FusionMode, GlobalInverseOptions};
use pmit_core::sim::random_clifford_circuit;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::attach_noise;
use crate::config::McmcConfig;
use crate::error::Result;
use crate::report::{Report, Table};

/// Path-sampling estimates of the fused inverse against its analytic value.
pub fn mcmc_convergence(c: &McmcConfig) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let circuit = random_clifford_circuit(c.n_qubits, c.depth, c.pattern, &mut rng)?;
    let noise = attach_noise(&circuit, &c.noise, c.placement, &mut rng)?;
    let opts = GlobalInverseOptions { epsilon: 0.0, mode: FusionMode::Exact, ..GlobalInverseOptions::default().with_xi(c.xi_reduce) };
    let exact = build_global_inverse(&circuit, &noise, &opts)?;
    let mut samples = c.samples.clone();
    samples.sort_unstable();

    let mut table =
        Table::new(&["samples", "gamma_ratio", "gamma_estimate", "gamma_analytic", "relative_error", "tv_distance", "interfering"]);
    for (i, &n) in samples.iter().enumerate() {
        let est = mcmc_global_estimate_with(&circuit, &noise, n, c.xi_reduce, &mut instance_rng(c.seed, i as u64 + 1))?;
        let coefs = est.coefficients();
        let mut tv: f64 = exact.corrections.iter().map(|((p, _), &v)| (coefs.get(p).copied().unwrap_or(0.0) - v).abs()).sum();
        tv += coefs.iter().filter(|(p, _)| !exact.corrections.keys().any(|(q, _)| q == *p)).map(|(_, v)| v.abs()).sum::<f64>();
        tv /= 2.0 * est.gamma_local;
        table.push(vec![
            n.into(),
            est.gamma_ratio.into(),
            est.gamma_estimate().into(),
            exact.gamma.into(),
            ((est.gamma_estimate() - exact.gamma) / exact.gamma).into(),
            tv.into(),
            est.interfering.into(),
        ]);
    }
    Ok(Report {
        summary: json!({
            "gamma_local": exact.gamma_local,
            "gamma_analytic": exact.gamma,
            "analytic_ratio": exact.gamma / exact.gamma_local,
            "keys": exact.corrections.len(),
            "seed": c.seed,
        }),
        table: Some(table),
    })
}
