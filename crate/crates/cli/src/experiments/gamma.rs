use pmit_core::channels::{build_spl_model, CircuitNoise, NoiseModelSpec};
use pmit_core::pec::{build_global_inverse, gamma_triple, run_ppec_with, GlobalInverseOptions};
use pmit_core::sim::{build_graph_state_circuit, build_grouping_circuit, route_linear, HeisenbergSim};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{attach_noise, observable};
use crate::config::{MbqcConfig, VqeConfig};
use crate::error::Result;
use crate::report::Report;

/// γ triple of the routed four-qubit measurement-grouping circuit.
pub fn vqe_grouping(c: &VqeConfig) -> Result<Report> {
    let circuit = route_linear(&build_grouping_circuit(), &c.routing)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let noise = attach_noise(&circuit, &c.noise, c.placement, &mut rng)?;
    let opts = GlobalInverseOptions { epsilon: 0.0, ..GlobalInverseOptions::default() };
    let t = gamma_triple(&circuit, &noise, &opts)?;
    let estimate = match &c.observable {
        Some(terms) if c.m > 0 => {
            let obs = observable(terms)?;
            let global = build_global_inverse(&circuit, &noise, &opts.with_xi(true))?;
            let e = run_ppec_with(&HeisenbergSim, &circuit, &noise, &obs, &global, c.m, c.shots, rng.next_u64())?;
            json!({ "mean": e.mean, "stderr": e.stderr })
        }
        _ => Value::Null,
    };
    Ok(Report {
        summary: json!({
            "gamma_pec": t.gamma_pec,
            "gamma_ppec": t.gamma_ppec,
            "gamma_ppec_xi": t.gamma_ppec_xi,
            "dropped_mass": t.dropped_mass,
            "noisy_layers": circuit.n_noisy_layers(),
            "two_qubit_gates": circuit.n_two_qubit_gates(),
            "estimate": estimate,
            "M": c.m,
            "shots": c.shots,
            "seed": c.seed,
        }),
        table: None,
    })
}

/// γ of PEC and pPEC(+XI) for routed graph-state preparation on each lattice.
pub fn mbqc_gamma(c: &MbqcConfig) -> Result<Report> {
    let opts = GlobalInverseOptions { epsilon: 0.0, expansion_budget: c.expansion_budget, ..GlobalInverseOptions::default() };
    let mut lattices = Vec::new();
    for l in &c.lattices {
        let circuit = build_graph_state_circuit(l.rows, l.cols, c.graph)?;
        let ch = build_spl_model(circuit.n_qubits, &NoiseModelSpec::spl(l.pauli_fidelity))?;
        let noise = CircuitNoise::layer_level(&circuit, &ch, c.placement)?;
        let t = gamma_triple(&circuit, &noise, &opts)?;
        lattices.push(json!({
            "rows": l.rows,
            "cols": l.cols,
            "pauli_fidelity": l.pauli_fidelity,
            "noisy_layers": circuit.n_noisy_layers(),
            "two_qubit_gates": circuit.n_two_qubit_gates(),
            "gamma_pec": t.gamma_pec,
            "gamma_ppec": t.gamma_ppec,
            "gamma_ppec_xi": t.gamma_ppec_xi,
            "xi_to_pec_ratio": t.gamma_ppec_xi / t.gamma_pec,
            "dropped_mass": t.dropped_mass,
        }));
    }
    Ok(Report { summary: json!({ "lattices": lattices, "seed": c.seed }), table: None })
}
