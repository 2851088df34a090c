use indexmap::IndexMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sampling::{CorrectionSample, ProductSampler, QuasiSampler};
use crate::channels::{CircuitNoise, DensePauliChannel, ExpansionStrategy, SplChannel, SplTerm};
use crate::clifford::{propagate_forward_in_place, propagate_in_place, Circuit, SignFlipMask};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::sim::Corrections;

/// A global correction is identified by its Pauli and the rotation angles it negates.
pub type CorrectionKey = (PauliString, SignFlipMask);

/// Largest key space (in bits) fused in a flat array.
pub const DENSE_MAX_BITS: usize = 22;

/// Where the fused correction is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Start,
    End,
}

/// How the propagated inverses are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FusionMode {
    /// Exact fusion when the key space fits, product form otherwise.
    #[default]
    Auto,
    /// Always fuse exactly.
    Exact,
    /// Keep the product form and expand it within the budget.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalInverseOptions {
    pub xi_reduce: bool,
    /// Drop fused coefficients with magnitude below this after every product.
    pub epsilon: f64,
    /// Coefficient budget per expanded factor in product form.
    pub expansion_budget: usize,
    pub boundary: Boundary,
    pub mode: FusionMode,
    pub strategy: ExpansionStrategy,
    /// Key-count cap for exact sparse fusion.
    pub max_keys: usize,
}

impl Default for GlobalInverseOptions {
    fn default() -> Self {
        GlobalInverseOptions {
            xi_reduce: false,
            epsilon: 0.0,
            expansion_budget: 4096,
            boundary: Boundary::Start,
            mode: FusionMode::Auto,
            strategy: ExpansionStrategy::LexicographicSupport,
            max_keys: 1 << 22,
        }
    }
}

impl GlobalInverseOptions {
    pub fn with_xi(mut self, xi_reduce: bool) -> Self {
        self.xi_reduce = xi_reduce;
        self
    }
}

/// The fused inverse of all noise in a circuit, acting at one boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalInverse {
    pub n_qubits: usize,
    pub boundary: Boundary,
    pub xi_reduced: bool,
    /// Exactly fused corrections (empty when `product` is used).
    pub corrections: IndexMap<CorrectionKey, f64>,
    /// Partially expanded product form, used when exact fusion is out of reach.
    pub product: Option<SplChannel>,
    pub gamma: f64,
    /// Product of the per-site overheads (plain PEC).
    pub gamma_local: f64,
    pub dropped_mass: f64,
}

impl GlobalInverse {
    pub fn trace(&self) -> f64 {
        if self.product.is_some() {
            1.0
        } else {
            self.corrections.values().sum()
        }
    }

    pub fn coefficient(&self, p: &PauliString, mask: &SignFlipMask) -> f64 {
        self.corrections.get(&(p.clone(), mask.clone())).copied().unwrap_or(0.0)
    }

    /// Layer position at which sampled corrections are inserted.
    pub fn position(&self, circuit: &Circuit) -> usize {
        match self.boundary {
            Boundary::Start => 0,
            Boundary::End => circuit.depth(),
        }
    }

    pub fn sampler(&self) -> Result<GlobalSampler> {
        Ok(match &self.product {
            Some(ch) => GlobalSampler::Product(ProductSampler::new(ch)?),
            None => GlobalSampler::Fused(QuasiSampler::new(self.corrections.iter().map(|(k, &c)| (k.clone(), c)))?),
        })
    }
}

/// Draws global corrections from either representation.
#[derive(Debug, Clone)]
pub enum GlobalSampler {
    Fused(QuasiSampler<CorrectionKey>),
    Product(ProductSampler),
}

impl GlobalSampler {
    pub fn gamma(&self) -> f64 {
        match self {
            GlobalSampler::Fused(s) => s.gamma(),
            GlobalSampler::Product(s) => s.gamma(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CorrectionSample {
        match self {
            GlobalSampler::Fused(s) => {
                let ((pauli, mask), sign) = s.sample(rng);
                CorrectionSample { pauli: pauli.clone(), sign, flip_mask: mask.clone() }
            }
            GlobalSampler::Product(s) => {
                let (pauli, sign) = s.sample(rng);
                CorrectionSample { pauli, sign, flip_mask: SignFlipMask::default() }
            }
        }
    }

    /// Circuit modifications for a sample inserted at `position`.
    pub fn corrections(sample: &CorrectionSample, position: usize) -> Corrections {
        Corrections { inserts: vec![(position, sample.pauli.clone())], flips: sample.flip_mask.any().then(|| sample.flip_mask.clone()) }
    }
}

/// One propagated inverse factor.
enum Factor {
    /// `a·I + b·P`
    Pair(f64, f64, CorrectionKey),
    General(Vec<(CorrectionKey, f64)>),
}

struct Propagator<'a> {
    circuit: &'a Circuit,
    boundary: Boundary,
    xi: bool,
}

impl Propagator<'_> {
    fn key(&self, p: &PauliString, position: usize) -> CorrectionKey {
        let mut out = p.clone();
        let mut mask = SignFlipMask::new(self.circuit.angles.len());
        match self.boundary {
            Boundary::Start => propagate_in_place(&mut out, &mut mask, self.circuit, position, 0),
            Boundary::End => propagate_forward_in_place(&mut out, &mut mask, self.circuit, position, self.circuit.depth()),
        }
        if self.xi {
            out = out.xi_reduce();
        }
        (out, mask)
    }

    fn factors(&self, inverse: &SplChannel, position: usize) -> Vec<Factor> {
        let mut out = Vec::with_capacity(inverse.product_terms.len() + inverse.expanded_factors.len());
        for t in &inverse.product_terms {
            let (a, b) = t.coefficients();
            out.push(Factor::Pair(a, b, self.key(&t.pauli, position)));
        }
        for f in &inverse.expanded_factors {
            let mut merged: IndexMap<CorrectionKey, f64> = IndexMap::new();
            for (p, &c) in &f.terms {
                *merged.entry(self.key(p, position)).or_insert(0.0) += c;
            }
            out.push(Factor::General(merged.into_iter().collect()));
        }
        out
    }
}

enum Accumulator {
    Dense { n: usize, xi: bool, values: Vec<f64> },
    Sparse(IndexMap<CorrectionKey, f64>),
}

impl Accumulator {
    fn dense_index(n: usize, xi: bool, p: &PauliString) -> usize {
        let (x, z) = p.masks();
        if xi {
            x as usize
        } else {
            (x | (z << n)) as usize
        }
    }

    fn multiply(&mut self, factor: &Factor) {
        match (self, factor) {
            (Accumulator::Dense { n, xi, values }, Factor::Pair(a, b, (p, _))) => {
                let k = Self::dense_index(*n, *xi, p);
                if k == 0 {
                    let s = a + b;
                    values.iter_mut().for_each(|v| *v *= s);
                    return;
                }
                let high = 1usize << (usize::BITS - 1 - k.leading_zeros());
                for i in 0..values.len() {
                    if i & high == 0 {
                        let j = i ^ k;
                        let (u, v) = (values[i], values[j]);
                        values[i] = a * u + b * v;
                        values[j] = a * v + b * u;
                    }
                }
            }
            (Accumulator::Dense { n, xi, values }, Factor::General(terms)) => {
                let mut out = vec![0.0; values.len()];
                for ((p, _), c) in terms {
                    let k = Self::dense_index(*n, *xi, p);
                    for (i, &v) in values.iter().enumerate() {
                        if v != 0.0 {
                            out[i ^ k] += c * v;
                        }
                    }
                }
                *values = out;
            }
            (Accumulator::Sparse(map), Factor::Pair(a, b, (p, m))) => {
                if p.is_identity() && !m.any() {
                    let s = a + b;
                    map.values_mut().for_each(|v| *v *= s);
                    return;
                }
                let mut out = IndexMap::with_capacity(2 * map.len());
                for ((q, qm), &v) in map.iter() {
                    *out.entry((q.clone(), qm.clone())).or_insert(0.0) += a * v;
                    let mut r = q.clone();
                    r.mul_assign(p);
                    let mut rm = qm.clone();
                    rm.xor_assign(m);
                    *out.entry((r, rm)).or_insert(0.0) += b * v;
                }
                *map = out;
            }
            (Accumulator::Sparse(map), Factor::General(terms)) => {
                let mut out = IndexMap::with_capacity(terms.len() * map.len());
                for ((q, qm), &v) in map.iter() {
                    for ((p, m), c) in terms {
                        let mut r = q.clone();
                        r.mul_assign(p);
                        let mut rm = qm.clone();
                        rm.xor_assign(m);
                        *out.entry((r, rm)).or_insert(0.0) += c * v;
                    }
                }
                *map = out;
            }
        }
    }

    /// Remove coefficients below `epsilon` (and exact cancellations); returns the dropped mass.
    fn truncate(&mut self, epsilon: f64) -> f64 {
        let mut dropped = 0.0;
        match self {
            Accumulator::Dense { values, .. } => {
                if epsilon > 0.0 {
                    for v in values.iter_mut() {
                        if *v != 0.0 && v.abs() < epsilon {
                            dropped += v.abs();
                            *v = 0.0;
                        }
                    }
                }
            }
            Accumulator::Sparse(map) => map.retain(|_, v| {
                let keep = v.abs() > crate::channels::ZERO_TOL && v.abs() >= epsilon;
                if !keep {
                    dropped += v.abs();
                }
                keep
            }),
        }
        dropped
    }

    fn len(&self) -> usize {
        match self {
            Accumulator::Dense { values, .. } => values.len(),
            Accumulator::Sparse(map) => map.len(),
        }
    }

    fn to_map(&self, n_qubits: usize, n_angles: usize) -> IndexMap<CorrectionKey, f64> {
        match self {
            Accumulator::Dense { n, xi, values } => values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > crate::channels::ZERO_TOL)
                .map(|(i, &v)| {
                    let (x, z) = if *xi { (i as u64, 0) } else { ((i & ((1 << n) - 1)) as u64, (i >> n) as u64) };
                    ((PauliString::from_masks(n_qubits, x, z), SignFlipMask::new(n_angles)), v)
                })
                .collect(),
            Accumulator::Sparse(map) => map.clone(),
        }
    }
}

fn check_noise(circuit: &Circuit, noise: &CircuitNoise) -> Result<()> {
    circuit.validate()?;
    if noise.n_qubits != circuit.n_qubits {
        return Err(Error::DimensionMismatch(circuit.n_qubits, noise.n_qubits));
    }
    if noise.depth != circuit.depth() {
        return Err(Error::InvalidCircuit(format!("noise attached to depth {} but circuit has depth {}", noise.depth, circuit.depth())));
    }
    Ok(())
}

fn use_dense(circuit: &Circuit, opts: &GlobalInverseOptions) -> bool {
    let bits = if opts.xi_reduce { circuit.n_qubits } else { 2 * circuit.n_qubits };
    circuit.angles.is_empty() && bits <= DENSE_MAX_BITS
}

/// Propagate every layer inverse to the chosen boundary and fuse them.
pub fn build_global_inverse(circuit: &Circuit, noise: &CircuitNoise, opts: &GlobalInverseOptions) -> Result<GlobalInverse> {
    let depth = circuit.depth();
    build_global_inverse_snapshots(circuit, noise, opts, &[depth]).map(|mut v| v.pop().expect("one snapshot"))
}

/// Global inverses of the prefixes ending at each cut (layer count), sharing one fusion pass.
/// Only noise sites at positions `≤ cut` contribute to a snapshot.
pub fn build_global_inverse_snapshots(
    circuit: &Circuit,
    noise: &CircuitNoise,
    opts: &GlobalInverseOptions,
    cuts: &[usize],
) -> Result<Vec<GlobalInverse>> {
    check_noise(circuit, noise)?;
    if opts.epsilon.is_nan() || opts.epsilon < 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon {} must be non-negative", opts.epsilon)));
    }
    if cuts.windows(2).any(|w| w[0] > w[1]) || cuts.iter().any(|&c| c > circuit.depth()) {
        return Err(Error::InvalidParameter("cuts must be sorted layer counts within the circuit".into()));
    }
    if opts.boundary == Boundary::End && cuts.iter().any(|&c| c != circuit.depth()) {
        return Err(Error::InvalidParameter("prefix snapshots require the start boundary".into()));
    }
    let dense = use_dense(circuit, opts);
    let product = match opts.mode {
        FusionMode::Product => true,
        FusionMode::Exact => false,
        FusionMode::Auto => !dense && circuit.angles.is_empty(),
    };
    if product {
        if !circuit.angles.is_empty() {
            return Err(Error::NotClifford("product-form global inverse needs a Clifford circuit".into()));
        }
        return cuts.iter().map(|&cut| product_inverse(circuit, noise, opts, cut)).collect();
    }

    let n = circuit.n_qubits;
    let prop = Propagator { circuit, boundary: opts.boundary, xi: opts.xi_reduce };
    let mut acc = if dense {
        let bits = if opts.xi_reduce { n } else { 2 * n };
        let mut values = vec![0.0; 1 << bits];
        values[0] = 1.0;
        Accumulator::Dense { n, xi: opts.xi_reduce, values }
    } else {
        let mut map = IndexMap::new();
        map.insert((PauliString::identity(n), SignFlipMask::new(circuit.angles.len())), 1.0);
        Accumulator::Sparse(map)
    };
    let mut dropped = 0.0;
    let mut gamma_local = 1.0;
    let mut out = Vec::with_capacity(cuts.len());
    let mut sites = noise.sites.iter().peekable();
    for &cut in cuts {
        while let Some(site) = sites.next_if(|s| s.position <= cut) {
            let inverse = site.channel.inverse()?;
            gamma_local *= inverse.gamma()?;
            for f in prop.factors(&inverse, site.position) {
                acc.multiply(&f);
                dropped += acc.truncate(opts.epsilon);
                if acc.len() > opts.max_keys {
                    return Err(Error::Capacity(format!("global inverse exceeded {} keys; raise epsilon or max_keys", opts.max_keys)));
                }
            }
        }
        let corrections = acc.to_map(n, circuit.angles.len());
        let gamma = corrections.values().map(|c| c.abs()).sum();
        out.push(GlobalInverse {
            n_qubits: n,
            boundary: opts.boundary,
            xi_reduced: opts.xi_reduce,
            corrections,
            product: None,
            gamma,
            gamma_local,
            dropped_mass: dropped,
        });
    }
    Ok(out)
}

/// Product-form global inverse: propagated terms, optional passive reduction, merging and guided expansion.
fn product_inverse(circuit: &Circuit, noise: &CircuitNoise, opts: &GlobalInverseOptions, cut: usize) -> Result<GlobalInverse> {
    let n = circuit.n_qubits;
    let prop = Propagator { circuit, boundary: opts.boundary, xi: false };
    let mut terms = Vec::new();
    let mut factors = Vec::new();
    let mut gamma_local = 1.0;
    for site in noise.sites.iter().filter(|s| s.position <= cut) {
        let inverse = site.channel.inverse()?;
        gamma_local *= inverse.gamma()?;
        for t in &inverse.product_terms {
            terms.push(SplTerm { pauli: prop.key(&t.pauli, site.position).0, ..t.clone() });
        }
        for f in &inverse.expanded_factors {
            let moved = DensePauliChannel::from_terms(n, f.terms.iter().map(|(p, &c)| (prop.key(p, site.position).0, c)))?;
            factors.push(moved);
        }
    }
    let mut ch = SplChannel { n_qubits: n, product_terms: terms, expanded_factors: factors };
    if opts.xi_reduce {
        ch = ch.passive_reduction();
    }
    ch = ch.merge_equal_terms().expand_guided(opts.expansion_budget, opts.strategy);
    let gamma = ch.gamma()?;
    Ok(GlobalInverse {
        n_qubits: n,
        boundary: opts.boundary,
        xi_reduced: opts.xi_reduce,
        corrections: IndexMap::new(),
        product: Some(ch),
        gamma,
        gamma_local,
        dropped_mass: 0.0,
    })
}

/// Overheads of plain PEC, pPEC and pPEC with XI-reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaTriple {
    pub gamma_pec: f64,
    pub gamma_ppec: f64,
    pub gamma_ppec_xi: f64,
    pub dropped_mass: f64,
}

impl GammaTriple {
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.gamma_ppec_xi <= self.gamma_ppec * (1.0 + tol) && self.gamma_ppec <= self.gamma_pec * (1.0 + tol)
    }
}

pub fn gamma_triple(circuit: &Circuit, noise: &CircuitNoise, opts: &GlobalInverseOptions) -> Result<GammaTriple> {
    let plain = build_global_inverse(circuit, noise, &opts.with_xi(false))?;
    let xi = build_global_inverse(circuit, noise, &opts.with_xi(true))?;
    Ok(GammaTriple {
        gamma_pec: plain.gamma_local,
        gamma_ppec: plain.gamma,
        gamma_ppec_xi: xi.gamma,
        dropped_mass: plain.dropped_mass.max(xi.dropped_mass),
    })
}
