use pmit_core::pec::{gamma_triple, instance_rng, GammaTriple, GlobalInverseOptions};
use pmit_core::sim::{random_clifford_circuit, TwoQubitPattern};
use rayon::prelude::*;
use serde_json::json;

use super::{attach_noise, mean_var};
use crate::config::{ScalingConfig, SweepAxis};
use crate::error::Result;
use crate::report::{Report, Table};

struct Sample {
    triple: GammaTriple,
    noisy_gates: usize,
}

/// γ of PEC, pPEC and pPEC+XI over random Clifford circuits at each depth point.
pub fn gamma_scaling(c: &ScalingConfig) -> Result<Report> {
    let opts = GlobalInverseOptions {
        epsilon: c.epsilon,
        expansion_budget: c.expansion_budget,
        mode: c.fusion_mode,
        ..GlobalInverseOptions::default()
    };
    let pattern = match c.axis {
        SweepAxis::Depth => c.pattern,
        SweepAxis::NoisyGates => TwoQubitPattern::SingleGate,
    };
    let mut depths = c.depths.clone();
    depths.sort_unstable();
    depths.dedup();
    let jobs: Vec<(usize, usize)> = (0..depths.len()).flat_map(|d| (0..c.instances).map(move |i| (d, i))).collect();
    let samples: Vec<Sample> = jobs
        .par_iter()
        .map(|&(d, i)| {
            let mut rng = instance_rng(c.seed, (d * c.instances + i) as u64);
            let circuit = random_clifford_circuit(c.n_qubits, depths[d], pattern, &mut rng)?;
            let noise = attach_noise(&circuit, &c.noise, c.placement, &mut rng)?;
            Ok(Sample { triple: gamma_triple(&circuit, &noise, &opts)?, noisy_gates: circuit.n_two_qubit_gates() })
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&[
        "depth",
        "noisy_gates",
        "gamma_pec_mean",
        "gamma_pec_std",
        "gamma_ppec_mean",
        "gamma_ppec_std",
        "gamma_ppec_xi_mean",
        "gamma_ppec_xi_std",
        "log_gamma_pec_mean",
        "log_gamma_ppec_mean",
        "log_gamma_ppec_xi_mean",
        "dropped_mass_max",
    ]);
    let mut violations = 0usize;
    for (d, chunk) in samples.chunks(c.instances).enumerate() {
        violations += chunk.iter().filter(|s| !s.triple.is_ordered(1e-9)).count();
        let stat = |f: &dyn Fn(&GammaTriple) -> f64| mean_var(&chunk.iter().map(|s| f(&s.triple)).collect::<Vec<_>>());
        let (pec, pec_v) = stat(&|t| t.gamma_pec);
        let (ppec, ppec_v) = stat(&|t| t.gamma_ppec);
        let (xi, xi_v) = stat(&|t| t.gamma_ppec_xi);
        let gates = chunk.iter().map(|s| s.noisy_gates as f64).sum::<f64>() / chunk.len() as f64;
        table.push(vec![
            depths[d].into(),
            gates.into(),
            pec.into(),
            pec_v.sqrt().into(),
            ppec.into(),
            ppec_v.sqrt().into(),
            xi.into(),
            xi_v.sqrt().into(),
            stat(&|t| t.gamma_pec.ln()).0.into(),
            stat(&|t| t.gamma_ppec.ln()).0.into(),
            stat(&|t| t.gamma_ppec_xi.ln()).0.into(),
            chunk.iter().map(|s| s.triple.dropped_mass).fold(0.0, f64::max).into(),
        ]);
    }
    Ok(Report { summary: json!({ "instances": c.instances, "ordering_violations": violations }), table: Some(table) })
}
