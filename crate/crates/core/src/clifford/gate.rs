use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::pauli::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    Sx,
    Sy,
    Sz,
    X,
    Y,
    Z,
    Cx,
    Cz,
    Swap,
    Rot,
}

impl GateKind {
    pub const CLIFFORD_1Q: [GateKind; 7] = [GateKind::H, GateKind::Sx, GateKind::Sy, GateKind::Sz, GateKind::X, GateKind::Y, GateKind::Z];
    pub const CLIFFORD_2Q: [GateKind; 3] = [GateKind::Cx, GateKind::Cz, GateKind::Swap];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn is_clifford(self) -> bool {
        self != GateKind::Rot
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::Sx => "sx",
            GateKind::Sy => "sy",
            GateKind::Sz => "sz",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Rot => "rot",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(self) -> Letter {
        match self {
            Axis::X => Letter::X,
            Axis::Y => Letter::Y,
            Axis::Z => Letter::Z,
        }
    }
}

/// Pauli rotation `exp(-i θ A / 2)` whose angle lives in the circuit's angle list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rotation {
    pub axis: Axis,
    pub angle_id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GateRepr", into = "GateRepr")]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: SmallVec<[usize; 2]>,
    pub rotation: Option<Rotation>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Gate> {
        if kind == GateKind::Rot {
            return Err(Error::InvalidGate("rot gates need an axis and angle_id; use Gate::rot".into()));
        }
        let g = Gate { kind, qubits: qubits.iter().copied().collect(), rotation: None };
        g.validate()?;
        Ok(g)
    }

    pub fn one(kind: GateKind, q: usize) -> Gate {
        Gate::new(kind, &[q]).expect("single-qubit gate")
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        Gate::new(kind, &[a, b]).expect("two-qubit gate")
    }

    pub fn h(q: usize) -> Gate {
        Gate::one(GateKind::H, q)
    }

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cx, control, target)
    }

    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Cz, a, b)
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b)
    }

    pub fn rot(axis: Axis, q: usize, angle_id: usize) -> Gate {
        Gate { kind: GateKind::Rot, qubits: smallvec![q], rotation: Some(Rotation { axis, angle_id }) }
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits.len() != self.kind.arity() {
            return Err(Error::InvalidGate(format!("{} expects {} qubit(s), got {}", self.kind, self.kind.arity(), self.qubits.len())));
        }
        if self.qubits.len() == 2 && self.qubits[0] == self.qubits[1] {
            return Err(Error::InvalidGate(format!("{} on repeated qubit {}", self.kind, self.qubits[0])));
        }
        if (self.kind == GateKind::Rot) != self.rotation.is_some() {
            return Err(Error::InvalidGate("axis/angle_id must be present exactly for rot gates".into()));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rotation {
            Some(r) => write!(f, "r{:?}[{}]({})", r.axis, r.angle_id, self.qubits[0]),
            None => {
                let qs: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
                write!(f, "{}({})", self.kind, qs.join(","))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRepr {
    kind: GateKind,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle_id: Option<usize>,
}

impl TryFrom<GateRepr> for Gate {
    type Error = Error;

    fn try_from(r: GateRepr) -> Result<Gate> {
        let rotation = match (r.axis, r.angle_id) {
            (Some(axis), Some(angle_id)) => Some(Rotation { axis, angle_id }),
            (None, None) => None,
            _ => return Err(Error::InvalidGate("axis and angle_id must be given together".into())),
        };
        let g = Gate { kind: r.kind, qubits: r.qubits.into_iter().collect(), rotation };
        g.validate()?;
        Ok(g)
    }
}

impl From<Gate> for GateRepr {
    fn from(g: Gate) -> GateRepr {
        GateRepr { kind: g.kind, qubits: g.qubits.to_vec(), axis: g.rotation.map(|r| r.axis), angle_id: g.rotation.map(|r| r.angle_id) }
    }
}
