use pmit_core::channels::CircuitNoise;
use pmit_core::pec::{build_global_inverse_snapshots, instance_rng, run_pec_with, run_ppec_with, GlobalInverseOptions, LocalSamplers};
use pmit_core::sim::{build_ising_trotter, Corrections, ObservableSpec, PauliVectorSim, Simulator};
use pmit_core::Letter;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::attach_noise;
use crate::config::IsingConfig;
use crate::error::Result;
use crate::report::{Report, Table};

const AXES: [(Letter, &str); 3] = [(Letter::X, "x"), (Letter::Y, "y"), (Letter::Z, "z")];

/// Magnetization of a noisy Trotterized Ising chain, plain and mitigated, after every step.
pub fn ising_magnetization(c: &IsingConfig) -> Result<Report> {
    let circuit = build_ising_trotter(c.n_qubits, c.h, c.j, c.dt, c.steps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let noise = attach_noise(&circuit, &c.noise, c.placement, &mut rng)?;
    let per_step = circuit.depth() / c.steps;
    let cuts: Vec<usize> = (1..=c.steps).map(|s| s * per_step).collect();
    let opts = GlobalInverseOptions { epsilon: c.epsilon, ..GlobalInverseOptions::default().with_xi(c.xi_reduce) };
    let snapshots = build_global_inverse_snapshots(&circuit, &noise, &opts, &cuts)?;
    let master = rng.next_u64();
    let sim = PauliVectorSim;

    let mut table = Table::new(&[
        "step",
        "axis",
        "ideal",
        "noisy",
        "pec_mean",
        "pec_stderr",
        "ppec_mean",
        "ppec_stderr",
        "gamma_pec",
        "gamma_ppec",
        "gamma_ratio",
        "dropped_mass",
    ]);
    let mut worst_z = [0.0f64; 2];
    for (s, (&cut, global)) in cuts.iter().zip(&snapshots).enumerate() {
        let pc = circuit.prefix(cut);
        let pn = noise.prefix(cut);
        let local = LocalSamplers::new(&pn)?;
        let gamma_pec = pn.gamma_pec()?;
        for (a, (letter, name)) in AXES.iter().enumerate() {
            let obs = ObservableSpec::magnetization(c.n_qubits, *letter);
            let exact =
                |n: &CircuitNoise| -> Result<f64> { Ok(obs.combine(&sim.term_expectations(&pc, n, &Corrections::none(), &obs.paulis())?)) };
            let ideal = exact(&CircuitNoise::noiseless(&pc))?;
            let noisy = exact(&pn)?;
            let mut seeds = instance_rng(master, (s * AXES.len() + a) as u64);
            let pec = run_pec_with(&sim, &pc, &pn, &obs, &local, c.m, c.shots, seeds.next_u64())?;
            let ppec = run_ppec_with(&sim, &pc, &pn, &obs, global, c.m, c.shots, seeds.next_u64())?;
            for (w, e) in worst_z.iter_mut().zip([pec, ppec]) {
                if e.stderr > 0.0 {
                    *w = w.max((e.mean - ideal).abs() / e.stderr);
                }
            }
            table.push(vec![
                (s + 1).into(),
                (*name).into(),
                ideal.into(),
                noisy.into(),
                pec.mean.into(),
                pec.stderr.into(),
                ppec.mean.into(),
                ppec.stderr.into(),
                gamma_pec.into(),
                global.gamma.into(),
                (global.gamma / gamma_pec).into(),
                global.dropped_mass.into(),
            ]);
        }
    }
    let last = snapshots.last().expect("at least one step");
    Ok(Report {
        summary: json!({
            "layers_per_step": per_step,
            "final_gamma_pec": noise.prefix(circuit.depth()).gamma_pec()?,
            "final_gamma_ppec": last.gamma,
            "final_dropped_mass": last.dropped_mass,
            "final_corrections": last.corrections.len(),
            "max_abs_z_pec": worst_z[0],
            "max_abs_z_ppec": worst_z[1],
            "M": c.m,
            "shots": c.shots,
            "seed": c.seed,
        }),
        table: Some(table),
    })
}
