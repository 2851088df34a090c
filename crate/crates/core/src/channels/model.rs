use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dense::{depolarizing_channel, DensePauliChannel};
use super::spl::{SplChannel, SplTerm};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    DepolarizingGateLevel,
    SplLinearTopology,
    RandomPauliGateLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModelSpec {
    pub kind: NoiseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli_fidelity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl NoiseModelSpec {
    pub fn depolarizing(p: f64) -> Self {
        NoiseModelSpec { kind: NoiseKind::DepolarizingGateLevel, p: Some(p), pauli_fidelity: None, seed: None }
    }

    pub fn spl(f: f64) -> Self {
        NoiseModelSpec { kind: NoiseKind::SplLinearTopology, p: None, pauli_fidelity: Some(f), seed: None }
    }

    pub fn random_pauli(p: f64, seed: u64) -> Self {
        NoiseModelSpec { kind: NoiseKind::RandomPauliGateLevel, p: Some(p), pauli_fidelity: None, seed: Some(seed) }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: Option<f64>| -> Result<f64> {
            let v = v.ok_or_else(|| Error::InvalidParameter(format!("noise kind {:?} needs `{name}`", self.kind)))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
            }
            Ok(v)
        };
        match self.kind {
            NoiseKind::DepolarizingGateLevel | NoiseKind::RandomPauliGateLevel => {
                unit("p", self.p)?;
            }
            NoiseKind::SplLinearTopology => {
                let f = unit("pauli_fidelity", self.pauli_fidelity)?;
                if f <= 0.0 {
                    return Err(Error::InvalidParameter("pauli_fidelity must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Model Paulis of a linear device: all weight-1 strings and all nearest-neighbour weight-2 strings.
pub fn linear_topology_paulis(n_qubits: usize) -> Vec<PauliString> {
    let nonid = [Letter::X, Letter::Y, Letter::Z];
    let mut out = Vec::with_capacity(3 * n_qubits + 9 * n_qubits.saturating_sub(1));
    for q in 0..n_qubits {
        for l in nonid {
            out.push(PauliString::single(n_qubits, q, l));
        }
    }
    for q in 0..n_qubits.saturating_sub(1) {
        for a in nonid {
            for b in nonid {
                let mut p = PauliString::single(n_qubits, q, a);
                p.set(q + 1, b);
                out.push(p);
            }
        }
    }
    out
}

/// Homogeneous SPL channel over `paulis` with per-term fidelity `f`.
pub fn spl_from_paulis(n_qubits: usize, paulis: Vec<PauliString>, f: f64) -> Result<SplChannel> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::InvalidParameter(format!("Pauli fidelity {f} outside (0, 1]")));
    }
    if f == 1.0 {
        return Ok(SplChannel::identity(n_qubits));
    }
    SplChannel::from_terms(n_qubits, paulis.into_iter().map(|p| SplTerm::from_fidelity(p, f)).collect())
}

/// Forward SPL channel of a linear-topology device.
pub fn build_spl_model(n_qubits: usize, spec: &NoiseModelSpec) -> Result<SplChannel> {
    if spec.kind != NoiseKind::SplLinearTopology {
        return Err(Error::InvalidParameter(format!("build_spl_model needs spl_linear_topology, got {:?}", spec.kind)));
    }
    spec.validate()?;
    spl_from_paulis(n_qubits, linear_topology_paulis(n_qubits), spec.pauli_fidelity.unwrap())
}

/// Random 2-qubit Pauli channel: identity weight 1−p, the rest split at random.
pub fn random_pauli_channel<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<DensePauliChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("error probability {p} outside [0, 1]")));
    }
    let weights: Vec<f64> = (0..15).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut it = weights.into_iter();
    DensePauliChannel::from_terms(
        2,
        PauliString::all(2).map(|q| {
            let c = if q.is_identity() { 1.0 - p } else { p * it.next().unwrap() / total };
            (q, c)
        }),
    )
}

/// Local 2-qubit channel of a gate-level model (depolarizing or random Pauli).
pub fn gate_channel<R: Rng + ?Sized>(spec: &NoiseModelSpec, rng: &mut R) -> Result<DensePauliChannel> {
    spec.validate()?;
    match spec.kind {
        NoiseKind::DepolarizingGateLevel => depolarizing_channel(spec.p.unwrap(), 2),
        NoiseKind::RandomPauliGateLevel => random_pauli_channel(spec.p.unwrap(), rng),
        NoiseKind::SplLinearTopology => Err(Error::InvalidParameter("SPL noise is layer-level".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::p;
    use rand::SeedableRng;

    #[test]
    fn term_counts() {
        assert_eq!(build_spl_model(2, &NoiseModelSpec::spl(0.9)).unwrap().product_terms.len(), 15);
        let c = build_spl_model(10, &NoiseModelSpec::spl(0.996)).unwrap();
        assert_eq!(c.product_terms.len(), 111);
        assert!(c.product_terms.iter().all(|t| (t.w - 0.998).abs() < 1e-15));
        let id = build_spl_model(4, &NoiseModelSpec::spl(1.0)).unwrap();
        assert_eq!(id.gamma().unwrap(), 1.0);
        assert!(build_spl_model(4, &NoiseModelSpec::spl(1.2)).is_err());
        assert!(build_spl_model(4, &NoiseModelSpec::depolarizing(0.1)).is_err());
    }

    #[test]
    fn linear_paulis_are_nearest_neighbour() {
        for q in linear_topology_paulis(5) {
            let s = q.support_qubits();
            assert!(s.len() == 1 || (s.len() == 2 && s[1] == s[0] + 1));
        }
        assert!(linear_topology_paulis(3).contains(&p("IXY")));
    }

    #[test]
    fn random_channel_is_normalized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let c = random_pauli_channel(0.01, &mut rng).unwrap();
        assert!(c.is_forward(1e-12));
        assert!((c.coef(&p("II")) - 0.99).abs() < 1e-15);
        assert_eq!(c.len(), 16);
    }
}
