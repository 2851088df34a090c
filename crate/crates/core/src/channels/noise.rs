use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dense::DensePauliChannel;
use super::model::{gate_channel, NoiseModelSpec};
use super::spl::{SplChannel, SplTerm};
use crate::clifford::{Circuit, Layer};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

/// Where a layer's noise acts relative to its gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    #[default]
    Before,
    After,
}

/// A Pauli channel acting just before layer `position` (`position == depth` is the measurement boundary).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSite {
    pub position: usize,
    pub channel: SplChannel,
}

/// Noise attached to a circuit, sorted by position.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitNoise {
    pub n_qubits: usize,
    pub depth: usize,
    pub sites: Vec<NoiseSite>,
}

/// Lift a local channel on `qubits` to the full register.
pub fn embed_channel(local: &DensePauliChannel, n_qubits: usize, qubits: &[usize]) -> DensePauliChannel {
    DensePauliChannel::from_terms(n_qubits, local.terms.iter().map(|(p, &c)| (p.embed(n_qubits, qubits), c)))
        .expect("embedding preserves dimensions")
}

impl CircuitNoise {
    pub fn noiseless(circuit: &Circuit) -> CircuitNoise {
        CircuitNoise { n_qubits: circuit.n_qubits, depth: circuit.depth(), sites: Vec::new() }
    }

    /// Attach one channel per noisy layer as produced by `make`.
    pub fn per_layer<F>(circuit: &Circuit, placement: Placement, mut make: F) -> Result<CircuitNoise>
    where
        F: FnMut(usize, &Layer) -> Result<Option<SplChannel>>,
    {
        let mut noise = CircuitNoise::noiseless(circuit);
        for (i, layer) in circuit.layers.iter().enumerate() {
            if !layer.noisy {
                continue;
            }
            if let Some(ch) = make(i, layer)? {
                if ch.n_qubits != circuit.n_qubits {
                    return Err(Error::DimensionMismatch(circuit.n_qubits, ch.n_qubits));
                }
                let position = match placement {
                    Placement::Before => i,
                    Placement::After => i + 1,
                };
                noise.push(position, ch);
            }
        }
        Ok(noise)
    }

    /// Same channel on every noisy layer.
    pub fn layer_level(circuit: &Circuit, channel: &SplChannel, placement: Placement) -> Result<CircuitNoise> {
        CircuitNoise::per_layer(circuit, placement, |_, _| Ok(Some(channel.clone())))
    }

    /// A local 2-qubit channel for every two-qubit gate of each noisy layer.
    pub fn gate_level<R: Rng + ?Sized>(
        circuit: &Circuit,
        spec: &NoiseModelSpec,
        placement: Placement,
        rng: &mut R,
    ) -> Result<CircuitNoise> {
        let n = circuit.n_qubits;
        CircuitNoise::per_layer(circuit, placement, |_, layer| {
            let mut ch = SplChannel::identity(n);
            for g in layer.two_qubit_gates() {
                let local = gate_channel(spec, rng)?;
                ch.expanded_factors.push(embed_channel(&local, n, &g.qubits));
            }
            Ok((!ch.expanded_factors.is_empty()).then_some(ch))
        })
    }

    /// Symmetric bit-flip channels just before measurement.
    pub fn with_readout_flips(mut self, p_flip: &[f64]) -> Result<CircuitNoise> {
        if p_flip.len() != self.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, p_flip.len()));
        }
        let mut terms = Vec::new();
        for (q, &px) in p_flip.iter().enumerate() {
            if !(0.0..0.5).contains(&px) {
                return Err(Error::InvalidParameter(format!("flip probability {px} outside [0, 1/2)")));
            }
            if px > 0.0 {
                terms.push(SplTerm::forward(PauliString::single(self.n_qubits, q, Letter::X), 1.0 - px));
            }
        }
        if !terms.is_empty() {
            let depth = self.depth;
            self.push(depth, SplChannel::from_terms(self.n_qubits, terms)?);
        }
        Ok(self)
    }

    pub fn push(&mut self, position: usize, channel: SplChannel) {
        assert!(position <= self.depth, "noise position {position} beyond depth {}", self.depth);
        let at = self.sites.partition_point(|s| s.position <= position);
        self.sites.insert(at, NoiseSite { position, channel });
    }

    pub fn is_noiseless(&self) -> bool {
        self.sites.iter().all(|s| s.channel.is_identity())
    }

    pub fn sites_at(&self, position: usize) -> impl Iterator<Item = &NoiseSite> {
        self.sites.iter().filter(move |s| s.position == position)
    }

    /// Product of the per-site inverse overheads (plain PEC).
    pub fn gamma_pec(&self) -> Result<f64> {
        let mut g = 1.0;
        for s in &self.sites {
            g *= s.channel.inverse()?.gamma()?;
        }
        Ok(g)
    }

    /// Noise of the circuit prefix with `depth` layers: every site at a position `≤ depth`.
    pub fn prefix(&self, depth: usize) -> CircuitNoise {
        CircuitNoise { n_qubits: self.n_qubits, depth, sites: self.sites.iter().filter(|s| s.position <= depth).cloned().collect() }
    }
}
