use super::circuit::{Circuit, SignFlipMask};
use super::gate::{Gate, GateKind};
use super::tables::{SignedTables, Tables};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

fn check_range(g: &Gate, n: usize) -> Result<()> {
    for &q in &g.qubits {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits: n });
        }
    }
    Ok(())
}

/// Phase-free image of `p` under a Clifford gate, from the lookup tables.
pub fn conjugate_pauli(g: &Gate, p: &PauliString) -> Result<PauliString> {
    if !g.kind.is_clifford() {
        return Err(Error::NotClifford(g.to_string()));
    }
    check_range(g, p.n_qubits())?;
    let mut out = p.clone();
    conjugate_in_place(g, &mut out);
    Ok(out)
}

/// Unchecked table lookup; rotation gates leave `p` untouched.
#[inline]
pub fn conjugate_in_place(g: &Gate, p: &mut PauliString) {
    let t = Tables::standard();
    match g.kind {
        GateKind::Rot => {}
        GateKind::Cx | GateKind::Cz | GateKind::Swap => {
            let [a, b] = Tables::table_qubits(g.kind, &g.qubits);
            let (la, lb) = (p.letter(a), p.letter(b));
            if la == Letter::I && lb == Letter::I {
                return;
            }
            let out = t.two_qubit(g.kind, la, lb);
            p.set(a, out[0]);
            p.set(b, out[1]);
        }
        GateKind::X | GateKind::Y | GateKind::Z => {}
        _ => {
            let q = g.qubits[0];
            let l = p.letter(q);
            if l != Letter::I {
                p.set(q, t.one_qubit(g.kind, l));
            }
        }
    }
}

/// Commuting `p` past a Pauli rotation leaves it unchanged but may negate the angle.
pub fn conjugate_through_rotation(g: &Gate, p: &PauliString) -> Result<(PauliString, bool)> {
    let r = g.rotation.ok_or_else(|| Error::InvalidGate(format!("{g} is not a rotation")))?;
    check_range(g, p.n_qubits())?;
    Ok((p.clone(), rotation_flips(r.axis.letter(), p.letter(g.qubits[0]))))
}

#[inline]
fn rotation_flips(axis: Letter, l: Letter) -> bool {
    l != Letter::I && l != axis
}

/// Move a Pauli inserted before layer `from_layer` back to just before
/// `to_layer`, recording which rotation angles must be negated.
pub fn propagate(p: &PauliString, circuit: &Circuit, from_layer: usize, to_layer: usize) -> Result<(PauliString, SignFlipMask)> {
    let len = circuit.layers.len();
    if from_layer > len {
        return Err(Error::LayerOutOfRange { index: from_layer, len });
    }
    if to_layer > from_layer {
        return Err(Error::LayerOutOfRange { index: to_layer, len: from_layer });
    }
    if p.n_qubits() != circuit.n_qubits {
        return Err(Error::DimensionMismatch(p.n_qubits(), circuit.n_qubits));
    }
    let mut out = p.clone();
    let mut mask = SignFlipMask::new(circuit.angles.len());
    propagate_in_place(&mut out, &mut mask, circuit, from_layer, to_layer);
    Ok((out, mask))
}

pub fn propagate_in_place(p: &mut PauliString, mask: &mut SignFlipMask, circuit: &Circuit, from_layer: usize, to_layer: usize) {
    for layer in circuit.layers[to_layer..from_layer].iter().rev() {
        for g in &layer.gates {
            if let Some(r) = g.rotation {
                if rotation_flips(r.axis.letter(), p.letter(g.qubits[0])) {
                    mask.toggle(r.angle_id);
                }
            } else {
                conjugate_in_place(g, p);
            }
        }
    }
}

/// Move a Pauli inserted before layer `from_layer` forward to just before
/// `to_layer` (`to_layer == depth` is the measurement boundary).
pub fn propagate_forward(p: &PauliString, circuit: &Circuit, from_layer: usize, to_layer: usize) -> Result<(PauliString, SignFlipMask)> {
    let len = circuit.layers.len();
    if to_layer > len {
        return Err(Error::LayerOutOfRange { index: to_layer, len });
    }
    if from_layer > to_layer {
        return Err(Error::LayerOutOfRange { index: from_layer, len: to_layer });
    }
    if p.n_qubits() != circuit.n_qubits {
        return Err(Error::DimensionMismatch(p.n_qubits(), circuit.n_qubits));
    }
    let mut out = p.clone();
    let mut mask = SignFlipMask::new(circuit.angles.len());
    propagate_forward_in_place(&mut out, &mut mask, circuit, from_layer, to_layer);
    Ok((out, mask))
}

pub fn propagate_forward_in_place(p: &mut PauliString, mask: &mut SignFlipMask, circuit: &Circuit, from_layer: usize, to_layer: usize) {
    for layer in &circuit.layers[from_layer..to_layer] {
        for g in &layer.gates {
            if let Some(r) = g.rotation {
                if rotation_flips(r.axis.letter(), p.letter(g.qubits[0])) {
                    mask.toggle(r.angle_id);
                }
            } else {
                conjugate_in_place(g, p);
            }
        }
    }
}

/// Signed Heisenberg step through a Clifford gate: `G† P G = s · P'`; returns s.
pub fn heisenberg_signed(g: &Gate, p: &mut PauliString) -> i8 {
    signed_step(g, p, false)
}

/// Signed Schrödinger step: `G P G† = s · P'`; returns s.
pub fn schrodinger_signed(g: &Gate, p: &mut PauliString) -> i8 {
    signed_step(g, p, true)
}

fn signed_step(g: &Gate, p: &mut PauliString, forward: bool) -> i8 {
    assert!(g.kind.is_clifford(), "signed step needs a Clifford gate");
    let local = p.restrict(&g.qubits);
    if local.is_identity() {
        return 1;
    }
    let t = SignedTables::get();
    let (img, s) = if forward { t.forward(g.kind, &local) } else { t.backward(g.kind, &local) };
    for (i, &q) in g.qubits.iter().enumerate() {
        p.set(q, img.letter(i));
    }
    *s
}
