use std::path::{Path, PathBuf};

use pmit_core::channels::{NoiseModelSpec, Placement};
use pmit_core::pec::FusionMode;
use pmit_core::sim::{GraphStateOptions, LatticeLayout, ObservableTerm, RouteOptions, Topology, TwoQubitPattern};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// One experiment, selected by the `experiment` field of the JSON config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum ExperimentConfig {
    GammaScaling(ScalingConfig),
    Distribution(DistributionConfig),
    SplDepthSweep(ScalingConfig),
    VqeGrouping(VqeConfig),
    MbqcGamma(MbqcConfig),
    IsingMagnetization(IsingConfig),
    McmcConvergence(McmcConfig),
}

/// Quantity on the x-axis of a γ sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Number of noisy layers.
    Depth,
    /// Number of noisy two-qubit gates, one per noisy layer.
    NoisyGates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    pub n_qubits: usize,
    pub depths: Vec<usize>,
    pub axis: SweepAxis,
    #[serde(default = "defaults::instances")]
    pub instances: usize,
    pub noise: NoiseModelSpec,
    #[serde(default = "defaults::pattern")]
    pub pattern: TwoQubitPattern,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "defaults::expansion_budget")]
    pub expansion_budget: usize,
    #[serde(default)]
    pub fusion_mode: FusionMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

/// Asymmetric readout errors drawn uniformly per qubit and per outcome from `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSpec {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionConfig {
    pub n_qubits: usize,
    /// Noisy two-qubit layers of the random circuit.
    pub depth: usize,
    #[serde(default = "defaults::pattern")]
    pub pattern: TwoQubitPattern,
    pub noise: NoiseModelSpec,
    #[serde(default)]
    pub readout: Option<ReadoutSpec>,
    /// Measured observable; defaults to a signed stabilizer of the output state.
    #[serde(default)]
    pub observable: Option<Vec<ObservableTerm>>,
    #[serde(default = "defaults::estimates")]
    pub estimates: usize,
    #[serde(rename = "M", default = "defaults::m")]
    pub m: usize,
    #[serde(default = "defaults::shots")]
    pub shots: u64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VqeConfig {
    pub noise: NoiseModelSpec,
    #[serde(default = "defaults::vqe_routing")]
    pub routing: RouteOptions,
    #[serde(default)]
    pub placement: Placement,
    /// Optional mitigated estimate of this observable with `M` instances.
    #[serde(default)]
    pub observable: Option<Vec<ObservableTerm>>,
    #[serde(rename = "M", default)]
    pub m: usize,
    #[serde(default = "defaults::shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub pauli_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbqcConfig {
    pub lattices: Vec<LatticeSpec>,
    #[serde(default = "defaults::mbqc_graph")]
    pub graph: GraphStateOptions,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default = "defaults::expansion_budget")]
    pub expansion_budget: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingConfig {
    pub n_qubits: usize,
    pub h: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub dt: f64,
    pub steps: usize,
    pub noise: NoiseModelSpec,
    #[serde(default = "defaults::after")]
    pub placement: Placement,
    #[serde(default = "defaults::ising_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub xi_reduce: bool,
    /// Mitigated circuit instances per data point.
    #[serde(rename = "M", default = "defaults::ising_m")]
    pub m: usize,
    #[serde(default = "defaults::shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McmcConfig {
    pub n_qubits: usize,
    pub depth: usize,
    pub noise: NoiseModelSpec,
    #[serde(default = "defaults::pattern")]
    pub pattern: TwoQubitPattern,
    #[serde(default)]
    pub placement: Placement,
    pub samples: Vec<u64>,
    #[serde(default = "defaults::yes")]
    pub xi_reduce: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

mod defaults {
    use super::*;

    pub fn instances() -> usize {
        100
    }
    pub fn estimates() -> usize {
        1000
    }
    pub fn m() -> usize {
        40
    }
    pub fn ising_m() -> usize {
        200
    }
    pub fn shots() -> u64 {
        1024
    }
    pub fn expansion_budget() -> usize {
        4096
    }
    pub fn ising_epsilon() -> f64 {
        1e-6
    }
    pub fn pattern() -> TwoQubitPattern {
        TwoQubitPattern::RandomPairs
    }
    pub fn after() -> Placement {
        Placement::After
    }
    pub fn yes() -> bool {
        true
    }
    pub fn vqe_routing() -> RouteOptions {
        RouteOptions { lookahead: 3, ..RouteOptions::default() }
    }
    pub fn mbqc_graph() -> GraphStateOptions {
        GraphStateOptions {
            topology: Topology::Linear,
            layout: LatticeLayout::RowMajor,
            swap_back: false,
            lookahead: 3,
            pack: true,
            decompose_swaps: false,
        }
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("`{field}`: {msg}"))
}

fn positive(field: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(invalid(field, "must be positive"));
    }
    Ok(())
}

fn noise(spec: &NoiseModelSpec) -> Result<()> {
    spec.validate().map_err(|e| invalid("noise", e))
}

fn epsilon(v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(invalid("epsilon", "must be a finite non-negative number"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        ExperimentConfig::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let c: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentConfig::GammaScaling(_) => "gamma_scaling",
            ExperimentConfig::Distribution(_) => "distribution",
            ExperimentConfig::SplDepthSweep(_) => "spl_depth_sweep",
            ExperimentConfig::VqeGrouping(_) => "vqe_grouping",
            ExperimentConfig::MbqcGamma(_) => "mbqc_gamma",
            ExperimentConfig::IsingMagnetization(_) => "ising_magnetization",
            ExperimentConfig::McmcConvergence(_) => "mcmc_convergence",
        }
    }

    pub fn seed_mut(&mut self) -> &mut u64 {
        match self {
            ExperimentConfig::GammaScaling(c) | ExperimentConfig::SplDepthSweep(c) => &mut c.seed,
            ExperimentConfig::Distribution(c) => &mut c.seed,
            ExperimentConfig::VqeGrouping(c) => &mut c.seed,
            ExperimentConfig::MbqcGamma(c) => &mut c.seed,
            ExperimentConfig::IsingMagnetization(c) => &mut c.seed,
            ExperimentConfig::McmcConvergence(c) => &mut c.seed,
        }
    }

    pub fn output_path_mut(&mut self) -> &mut Option<PathBuf> {
        match self {
            ExperimentConfig::GammaScaling(c) | ExperimentConfig::SplDepthSweep(c) => &mut c.output_path,
            ExperimentConfig::Distribution(c) => &mut c.output_path,
            ExperimentConfig::VqeGrouping(c) => &mut c.output_path,
            ExperimentConfig::MbqcGamma(c) => &mut c.output_path,
            ExperimentConfig::IsingMagnetization(c) => &mut c.output_path,
            ExperimentConfig::McmcConvergence(c) => &mut c.output_path,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExperimentConfig::GammaScaling(c) | ExperimentConfig::SplDepthSweep(c) => {
                if c.n_qubits < 2 {
                    return Err(invalid("n_qubits", "needs at least 2 qubits"));
                }
                if c.depths.is_empty() {
                    return Err(invalid("depths", "must list at least one point"));
                }
                positive("instances", c.instances)?;
                positive("expansion_budget", c.expansion_budget)?;
                noise(&c.noise)?;
                epsilon(c.epsilon)
            }
            ExperimentConfig::Distribution(c) => {
                if c.n_qubits < 2 {
                    return Err(invalid("n_qubits", "needs at least 2 qubits"));
                }
                positive("estimates", c.estimates)?;
                if c.estimates < 2 {
                    return Err(invalid("estimates", "needs at least 2 estimates for a variance"));
                }
                positive("M", c.m)?;
                noise(&c.noise)?;
                if let Some(r) = c.readout {
                    if !(0.0 <= r.lo && r.lo <= r.hi && r.hi < 0.5) {
                        return Err(invalid("readout", "needs 0 ≤ lo ≤ hi < 0.5"));
                    }
                }
                observable(c.observable.as_deref(), c.n_qubits)?;
                epsilon(c.epsilon)
            }
            ExperimentConfig::VqeGrouping(c) => {
                noise(&c.noise)?;
                observable(c.observable.as_deref(), 4)?;
                if c.m > 0 && c.observable.is_none() {
                    return Err(invalid("observable", "required when M > 0"));
                }
                Ok(())
            }
            ExperimentConfig::MbqcGamma(c) => {
                if c.lattices.is_empty() {
                    return Err(invalid("lattices", "must list at least one lattice"));
                }
                for l in &c.lattices {
                    positive("lattices.rows", l.rows)?;
                    positive("lattices.cols", l.cols)?;
                    if !(l.pauli_fidelity > 0.0 && l.pauli_fidelity <= 1.0) {
                        return Err(invalid("lattices.pauli_fidelity", "must lie in (0, 1]"));
                    }
                }
                positive("expansion_budget", c.expansion_budget)
            }
            ExperimentConfig::IsingMagnetization(c) => {
                if c.n_qubits < 2 {
                    return Err(invalid("n_qubits", "needs at least 2 qubits"));
                }
                positive("steps", c.steps)?;
                positive("M", c.m)?;
                if !(c.dt.is_finite() && c.dt > 0.0) {
                    return Err(invalid("dt", "must be positive"));
                }
                noise(&c.noise)?;
                epsilon(c.epsilon)
            }
            ExperimentConfig::McmcConvergence(c) => {
                if c.n_qubits < 2 {
                    return Err(invalid("n_qubits", "needs at least 2 qubits"));
                }
                positive("depth", c.depth)?;
                if c.samples.is_empty() || c.samples.contains(&0) {
                    return Err(invalid("samples", "must list positive sample counts"));
                }
                noise(&c.noise)
            }
        }
    }
}

fn observable(terms: Option<&[ObservableTerm]>, n_qubits: usize) -> Result<()> {
    let Some(terms) = terms else { return Ok(()) };
    if terms.is_empty() {
        return Err(invalid("observable", "needs at least one term"));
    }
    if let Some(t) = terms.iter().find(|t| t.pauli.n_qubits() != n_qubits) {
        return Err(invalid("observable", format!("{} does not act on {n_qubits} qubits", t.pauli)));
    }
    Ok(())
}
