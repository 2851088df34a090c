use pmit_core::channels::{CircuitNoise, Placement};
use pmit_core::pec::{
    build_global_inverse, instance_rng, run_pec_with, run_ppec_with, run_unmitigated, GlobalInverseOptions, LocalSamplers, ReadoutModel,
};
use pmit_core::sim::{
    append_basis_change, output_stabilizer, random_clifford_circuit, Corrections, HeisenbergSim, ObservableSpec, Simulator,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use super::{attach_noise, mean_var, observable};
use crate::config::DistributionConfig;
use crate::error::{CliError, Result};
use crate::report::{Report, Table};

const METHODS: [&str; 4] = ["unmitigated", "pec", "ppec", "ppec_xi"];

/// P(F ≥ ratio) for two samples of equal size under equal variances; `None` when the ratio is undefined.
fn variance_p_value(ratio: f64, n: usize) -> Option<f64> {
    let dof = (n - 1) as f64;
    ratio.is_finite().then(|| 1.0 - FisherSnedecor::new(dof, dof).expect("positive degrees of freedom").cdf(ratio))
}

/// Repeated mitigated estimates of one observable on a fixed random Clifford circuit.
pub fn distribution(c: &DistributionConfig) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut circuit = random_clifford_circuit(c.n_qubits, c.depth, c.pattern, &mut rng)?;
    let obs = match &c.observable {
        Some(terms) => observable(terms)?,
        None => {
            let (stab, s1) = output_stabilizer(&circuit, 0)?;
            let (z, s2) = append_basis_change(&mut circuit, &stab);
            ObservableSpec::new(vec![((s1 * s2) as f64, z)])?
        }
    };
    let mut noise = attach_noise(&circuit, &c.noise, Placement::Before, &mut rng)?;
    let mut readout = Value::Null;
    if let Some(r) = c.readout {
        if obs.terms.iter().any(|t| !t.pauli.is_z_type()) {
            return Err(CliError::Config("`observable`: readout noise needs Z-type observables".into()));
        }
        let model = ReadoutModel::random(c.n_qubits, r.lo, r.hi, &mut rng)?;
        let flips = model.twirled_flips();
        readout = json!({ "per_qubit": model.per_qubit, "twirled_flips": flips });
        noise = noise.with_readout_flips(&flips)?;
    }

    let sim = HeisenbergSim;
    let ideal = obs.combine(&sim.term_expectations(&circuit, &CircuitNoise::noiseless(&circuit), &Corrections::none(), &obs.paulis())?);
    let opts = GlobalInverseOptions { epsilon: c.epsilon, ..GlobalInverseOptions::default() };
    let local = LocalSamplers::new(&noise)?;
    let plain = build_global_inverse(&circuit, &noise, &opts.with_xi(false))?;
    let xi = build_global_inverse(&circuit, &noise, &opts.with_xi(true))?;
    let gammas = [1.0, local.gamma_total, plain.gamma, xi.gamma];

    let masters: Vec<u64> = METHODS.iter().map(|_| rng.next_u64()).collect();
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(METHODS.len());
    for (k, master) in masters.iter().enumerate() {
        let v: Vec<f64> = (0..c.estimates as u64)
            .into_par_iter()
            .map(|e| {
                let seed = instance_rng(*master, e).next_u64();
                let est = match k {
                    0 => run_unmitigated(&sim, &circuit, &noise, &obs, c.m, c.shots, seed)?,
                    1 => run_pec_with(&sim, &circuit, &noise, &obs, &local, c.m, c.shots, seed)?,
                    2 => run_ppec_with(&sim, &circuit, &noise, &obs, &plain, c.m, c.shots, seed)?,
                    _ => run_ppec_with(&sim, &circuit, &noise, &obs, &xi, c.m, c.shots, seed)?,
                };
                Ok(est.mean)
            })
            .collect::<Result<_>>()?;
        values.push(v);
    }

    let mut table = Table::new(&["method", "estimate", "value"]);
    let mut methods = serde_json::Map::new();
    let var_pec = mean_var(&values[1]).1;
    for (k, name) in METHODS.iter().enumerate() {
        for (e, v) in values[k].iter().enumerate() {
            table.push(vec![(*name).into(), e.into(), (*v).into()]);
        }
        let (mean, var) = mean_var(&values[k]);
        let stderr = (var / c.estimates as f64).sqrt();
        let mut m = json!({
            "gamma": gammas[k],
            "mean": mean,
            "variance": var,
            "stderr": stderr,
            "z_score": if stderr > 0.0 { (mean - ideal) / stderr } else { 0.0 },
        });
        if k >= 2 {
            let ratio = (var_pec > 0.0).then(|| var / var_pec);
            m["variance_ratio_to_pec"] = json!(ratio);
            m["p_value_larger_than_pec"] = json!(ratio.and_then(|r| variance_p_value(r, c.estimates)));
        }
        methods.insert((*name).into(), m);
    }
    Ok(Report {
        summary: json!({
            "ideal": ideal,
            "observable": obs,
            "noisy_layers": circuit.n_noisy_layers(),
            "two_qubit_gates": circuit.n_two_qubit_gates(),
            "readout": readout,
            "dropped_mass": plain.dropped_mass.max(xi.dropped_mass),
            "M": c.m,
            "shots": c.shots,
            "seed": c.seed,
            "methods": methods,
        }),
        table: Some(table),
    })
}
