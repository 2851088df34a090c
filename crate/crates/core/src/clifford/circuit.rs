use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::gate::Gate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LayerRepr", into = "LayerRepr")]
pub struct Layer {
    pub gates: Vec<Gate>,
    pub noisy: bool,
}

impl Layer {
    /// Layer with noise flagged automatically from gate arity.
    pub fn new(gates: Vec<Gate>) -> Layer {
        let noisy = gates.iter().any(|g| g.arity() == 2);
        Layer { gates, noisy }
    }

    pub fn with_noise(gates: Vec<Gate>, noisy: bool) -> Layer {
        Layer { gates, noisy }
    }

    pub fn two_qubit_gates(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().filter(|g| g.arity() == 2)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    noisy: Option<bool>,
    gates: Vec<Gate>,
}

impl TryFrom<LayerRepr> for Layer {
    type Error = Error;
    fn try_from(r: LayerRepr) -> Result<Layer> {
        Ok(match r.noisy {
            Some(noisy) => Layer::with_noise(r.gates, noisy),
            None => Layer::new(r.gates),
        })
    }
}

impl From<Layer> for LayerRepr {
    fn from(l: Layer) -> LayerRepr {
        LayerRepr { noisy: Some(l.noisy), gates: l.gates }
    }
}

/// Circuit as ordered layers; layer 0 acts first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circuit {
    pub n_qubits: usize,
    #[serde(default)]
    pub angles: Vec<f64>,
    pub layers: Vec<Layer>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit { n_qubits, angles: Vec::new(), layers: Vec::new() }
    }

    pub fn push(&mut self, layer: Layer) -> &mut Self {
        self.layers.push(layer);
        self
    }

    /// Append a layer built from `gates`, auto-flagging noise.
    pub fn push_gates(&mut self, gates: Vec<Gate>) -> &mut Self {
        self.push(Layer::new(gates))
    }

    /// Register a new rotation angle and return its id.
    pub fn add_angle(&mut self, theta: f64) -> usize {
        self.angles.push(theta);
        self.angles.len() - 1
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn n_noisy_layers(&self) -> usize {
        self.layers.iter().filter(|l| l.noisy).count()
    }

    pub fn n_two_qubit_gates(&self) -> usize {
        self.layers.iter().map(|l| l.two_qubit_gates().count()).sum()
    }

    pub fn is_clifford(&self) -> bool {
        self.gates().all(|g| g.kind.is_clifford())
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidCircuit("n_qubits must be positive".into()));
        }
        for (li, layer) in self.layers.iter().enumerate() {
            let mut used = vec![false; self.n_qubits];
            for g in &layer.gates {
                g.validate()?;
                for &q in &g.qubits {
                    if q >= self.n_qubits {
                        return Err(Error::QubitOutOfRange { qubit: q, n_qubits: self.n_qubits });
                    }
                    if used[q] {
                        return Err(Error::InvalidCircuit(format!("qubit {q} used twice in layer {li}")));
                    }
                    used[q] = true;
                }
                if let Some(r) = g.rotation {
                    if r.angle_id >= self.angles.len() {
                        return Err(Error::InvalidCircuit(format!("angle_id {} out of range ({} angles)", r.angle_id, self.angles.len())));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn load(path: &Path) -> Result<Circuit> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Circuit::from_json(&s)
    }

    /// Angles with the masked entries negated.
    pub fn signed_angles(&self, flips: Option<&SignFlipMask>) -> Vec<f64> {
        self.angles
            .iter()
            .enumerate()
            .map(|(i, &a)| match flips {
                Some(m) if m.get(i) => -a,
                _ => a,
            })
            .collect()
    }

    /// Prefix of the first `n_layers` layers (angles kept whole).
    pub fn prefix(&self, n_layers: usize) -> Circuit {
        Circuit { n_qubits: self.n_qubits, angles: self.angles.clone(), layers: self.layers[..n_layers].to_vec() }
    }

    /// Append `other`'s layers, renumbering its angles.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        let offset = self.angles.len();
        self.angles.extend_from_slice(&other.angles);
        for layer in &other.layers {
            let mut l = layer.clone();
            for g in &mut l.gates {
                if let Some(r) = g.rotation.as_mut() {
                    r.angle_id += offset;
                }
            }
            self.layers.push(l);
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.layers.iter().enumerate() {
            let gs: Vec<String> = l.gates.iter().map(|g| g.to_string()).collect();
            writeln!(f, "{i:>3}{} {}", if l.noisy { "*" } else { " " }, gs.join(" "))?;
        }
        Ok(())
    }
}

/// Which rotation angles are negated by a correction.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SignFlipMask {
    len: usize,
    bits: SmallVec<[u64; 2]>,
}

impl SignFlipMask {
    pub fn new(len: usize) -> SignFlipMask {
        SignFlipMask { len, bits: SmallVec::from_elem(0, len.div_ceil(64)) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn any(&self) -> bool {
        self.bits.iter().any(|&w| w != 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "flip index {i} out of range {}", self.len);
        self.bits[i / 64] ^= 1 << (i % 64);
    }

    /// Compose two masks (flips cancel in pairs).
    pub fn xor_assign(&mut self, other: &SignFlipMask) {
        if other.len == 0 {
            return;
        }
        if self.len == 0 {
            *self = other.clone();
            return;
        }
        assert_eq!(self.len, other.len, "mask length mismatch");
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= *b;
        }
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

impl fmt::Debug for SignFlipMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flips{:?}", self.ones())
    }
}

impl fmt::Display for SignFlipMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::gate::Axis;

    #[test]
    fn json_round_trip() {
        let mut c = Circuit::new(3);
        let a = c.add_angle(0.3);
        c.push_gates(vec![Gate::h(0), Gate::rot(Axis::Z, 2, a)]);
        c.push_gates(vec![Gate::cx(0, 1)]);
        let s = c.to_json();
        let back = Circuit::from_json(&s).unwrap();
        assert_eq!(back, c);
        assert!(back.layers[1].noisy);
        assert!(!back.layers[0].noisy);
    }

    #[test]
    fn json_noisy_flag_defaults_and_overrides() {
        let s = r#"{"n_qubits":2,"layers":[{"gates":[{"kind":"cz","qubits":[0,1]}]},
                    {"noisy":true,"gates":[{"kind":"h","qubits":[0]}]}]}"#;
        let c = Circuit::from_json(s).unwrap();
        assert!(c.layers[0].noisy && c.layers[1].noisy);
    }

    #[test]
    fn json_rejects_bad_input() {
        let unknown = r#"{"n_qubits":1,"layers":[],"extra":1}"#;
        assert!(Circuit::from_json(unknown).is_err());
        let gate_key = r#"{"n_qubits":1,"layers":[{"gates":[{"kind":"h","qubits":[0],"foo":2}]}]}"#;
        assert!(Circuit::from_json(gate_key).is_err());
        let reuse = r#"{"n_qubits":2,"layers":[{"gates":[{"kind":"h","qubits":[0]},{"kind":"cx","qubits":[0,1]}]}]}"#;
        assert!(Circuit::from_json(reuse).is_err());
        let arity = r#"{"n_qubits":2,"layers":[{"gates":[{"kind":"cx","qubits":[0]}]}]}"#;
        assert!(Circuit::from_json(arity).is_err());
        let angle = r#"{"n_qubits":1,"layers":[{"gates":[{"kind":"rot","qubits":[0],"axis":"x","angle_id":0}]}]}"#;
        assert!(Circuit::from_json(angle).is_err());
        let range = r#"{"n_qubits":1,"layers":[{"gates":[{"kind":"x","qubits":[3]}]}]}"#;
        assert!(Circuit::from_json(range).is_err());
    }

    #[test]
    fn mask_ops() {
        let mut m = SignFlipMask::new(70);
        m.toggle(3);
        m.toggle(68);
        assert!(m.get(68) && m.get(3) && !m.get(4));
        let mut k = m.clone();
        k.xor_assign(&m);
        assert!(!k.any());
        assert_eq!(m.ones(), vec![3, 68]);
    }
}
