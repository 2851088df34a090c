//! PEC and propagated PEC: sampling, global inverse fusion, estimators, path sampling and readout twirling.

mod estimator;
mod global;
mod mcmc;
mod readout;
mod sampling;

pub use estimator::{
    exact_mitigated, instance_rng, run_pec, run_pec_with, run_ppec, run_ppec_sampled, run_ppec_with, run_unmitigated, summarize,
    LocalSamplers, MitigationEstimate,
};
pub use global::{
    build_global_inverse, build_global_inverse_snapshots, gamma_triple, Boundary, CorrectionKey, FusionMode, GammaTriple, GlobalInverse,
    GlobalInverseOptions, GlobalSampler, DENSE_MAX_BITS,
};
pub use mcmc::{mcmc_global_estimate, mcmc_global_estimate_with, McmcEstimate};
pub use readout::{propagate_measurement_errors, simulate_twirled_assignment, twirl_readout, ReadoutModel, TwirlProtocol};
pub use sampling::{sample_local_correction, CorrectionSample, ProductSampler, QuasiSampler};
