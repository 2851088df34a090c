//! Commutation lookup tables for the Clifford gate set and their dense-matrix check.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use super::gate::GateKind;
use crate::linalg::{as_scaled_pauli, c, CMat, ONE, ZERO};
use crate::pauli::{Letter, PauliString};

const CX_TABLE: &str = "II II IX XX IY XY IZ IZ XI XI XX IX XY IY XZ XZ \
                        YI YZ YX ZY YY ZX YZ YI ZI ZZ ZX YY ZY YX ZZ ZI";
const CZ_TABLE: &str = "II II IX ZX IY ZY IZ IZ XI XZ XX YY XY YX XZ XI \
                        YI YZ YX XY YY XX YZ YI ZI ZI ZX IX ZY IY ZZ ZZ";
const SWAP_TABLE: &str = "II II IX XI IY YI IZ ZI XI IX XX XX XY YX XZ ZX \
                          YI IY YX XY YY YY YZ ZY ZI IZ ZX XZ ZY YZ ZZ ZZ";
const H_TABLE: &str = "I I X Z Y Y Z X";
const SX_TABLE: &str = "I I X X Y Z Z Y";
const SY_TABLE: &str = "I I X Z Y Y Z X";
const SZ_TABLE: &str = "I I X Y Y X Z Z";
const PAULI_TABLE: &str = "I I X X Y Y Z Z";

fn kind_index(kind: GateKind) -> usize {
    match kind {
        GateKind::H => 0,
        GateKind::Sx => 1,
        GateKind::Sy => 2,
        GateKind::Sz => 3,
        GateKind::X => 4,
        GateKind::Y => 5,
        GateKind::Z => 6,
        GateKind::Cx => 7,
        GateKind::Cz => 8,
        GateKind::Swap => 9,
        GateKind::Rot => panic!("rotations have no lookup table"),
    }
}

fn letter_at(s: &str, i: usize) -> Letter {
    Letter::from_char(s.as_bytes()[i] as char).expect("table letter")
}

/// Phase-free images `C P C†` for every Clifford kind.
///
/// Two-qubit tables are indexed by `4·rank(a) + rank(b)` where `(a, b)` are the
/// letters in table order; see [`Tables::table_qubits`].
#[derive(Clone, PartialEq, Eq)]
pub struct Tables {
    one: [[Letter; 4]; 7],
    two: [[[Letter; 2]; 16]; 3],
}

impl Tables {
    pub fn standard() -> &'static Tables {
        static T: OnceLock<Tables> = OnceLock::new();
        T.get_or_init(|| {
            let mut one = [[Letter::I; 4]; 7];
            let srcs1 = [H_TABLE, SX_TABLE, SY_TABLE, SZ_TABLE, PAULI_TABLE, PAULI_TABLE, PAULI_TABLE];
            for (k, src) in srcs1.iter().enumerate() {
                let toks: Vec<&str> = src.split_whitespace().collect();
                for pair in toks.chunks(2) {
                    let from = letter_at(pair[0], 0);
                    one[k][from.rank() as usize] = letter_at(pair[1], 0);
                }
            }
            let mut two = [[[Letter::I; 2]; 16]; 3];
            for (k, src) in [CX_TABLE, CZ_TABLE, SWAP_TABLE].iter().enumerate() {
                let toks: Vec<&str> = src.split_whitespace().collect();
                for pair in toks.chunks(2) {
                    let idx = 4 * letter_at(pair[0], 0).rank() as usize + letter_at(pair[0], 1).rank() as usize;
                    two[k][idx] = [letter_at(pair[1], 0), letter_at(pair[1], 1)];
                }
            }
            Tables { one, two }
        })
    }

    /// Gate qubits in the letter order of the table. The CX table lists the
    /// target letter first and the control letter second.
    pub fn table_qubits(kind: GateKind, qubits: &[usize]) -> [usize; 2] {
        match kind {
            GateKind::Cx => [qubits[1], qubits[0]],
            _ => [qubits[0], qubits[1]],
        }
    }

    pub fn one_qubit(&self, kind: GateKind, l: Letter) -> Letter {
        self.one[kind_index(kind)][l.rank() as usize]
    }

    pub fn two_qubit(&self, kind: GateKind, a: Letter, b: Letter) -> [Letter; 2] {
        self.two[kind_index(kind) - 7][4 * a.rank() as usize + b.rank() as usize]
    }

    /// Overwrite one entry (used to build negative controls).
    pub fn set_one_qubit(&mut self, kind: GateKind, from: Letter, to: Letter) {
        self.one[kind_index(kind)][from.rank() as usize] = to;
    }

    pub fn set_two_qubit(&mut self, kind: GateKind, from: [Letter; 2], to: [Letter; 2]) {
        self.two[kind_index(kind) - 7][4 * from[0].rank() as usize + from[1].rank() as usize] = to;
    }
}

/// Local unitary of a Clifford kind; local bit i ↔ `qubits[i]`.
pub fn clifford_matrix(kind: GateKind) -> CMat {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let half = |re: f64, im: f64| c(re / 2.0, im / 2.0);
    match kind {
        GateKind::H => CMat::from_row_slice(2, 2, &[h, h, h, -h]),
        GateKind::Sx => CMat::from_row_slice(2, 2, &[half(1., 1.), half(1., -1.), half(1., -1.), half(1., 1.)]),
        GateKind::Sy => CMat::from_row_slice(2, 2, &[half(1., 1.), half(-1., -1.), half(1., 1.), half(1., 1.)]),
        GateKind::Sz => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c(0., 1.)]),
        GateKind::X => CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        GateKind::Y => CMat::from_row_slice(2, 2, &[ZERO, c(0., -1.), c(0., 1.), ZERO]),
        GateKind::Z => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        GateKind::Cx => {
            // control = local bit 0, target = local bit 1
            let mut m = CMat::zeros(4, 4);
            for b in 0..4usize {
                let out = if b & 1 == 1 { b ^ 2 } else { b };
                m[(out, b)] = ONE;
            }
            m
        }
        GateKind::Cz => {
            let mut m = CMat::identity(4, 4);
            m[(3, 3)] = -ONE;
            m
        }
        GateKind::Swap => {
            let mut m = CMat::zeros(4, 4);
            for b in 0..4usize {
                let out = ((b & 1) << 1) | (b >> 1);
                m[(out, b)] = ONE;
            }
            m
        }
        GateKind::Rot => panic!("rotation matrix depends on axis and angle"),
    }
}

/// Signed images of local Paulis, derived from the gate matrices.
pub struct SignedTables {
    /// `G P G†` indexed by kind and local Pauli index `x | z << k`.
    forward: Vec<Vec<(PauliString, i8)>>,
    /// `G† P G`.
    backward: Vec<Vec<(PauliString, i8)>>,
}

fn local_index(p: &PauliString) -> usize {
    let (x, z) = p.masks();
    (x | (z << p.n_qubits())) as usize
}

impl SignedTables {
    pub fn get() -> &'static SignedTables {
        static T: OnceLock<SignedTables> = OnceLock::new();
        T.get_or_init(|| {
            let kinds: Vec<GateKind> = GateKind::CLIFFORD_1Q.iter().chain(&GateKind::CLIFFORD_2Q).copied().collect();
            let mut forward = vec![Vec::new(); 10];
            let mut backward = vec![Vec::new(); 10];
            for kind in kinds {
                let k = kind.arity();
                let g = clifford_matrix(kind);
                let mut fw = vec![(PauliString::identity(k), 1i8); 1 << (2 * k)];
                let mut bw = fw.clone();
                for p in PauliString::all(k) {
                    let pm = crate::linalg::pauli_matrix(&p);
                    let (q, s) = as_scaled_pauli(&(&g * &pm * g.adjoint()), k).expect("Clifford image");
                    fw[local_index(&p)] = (q, real_sign(s));
                    let (q, s) = as_scaled_pauli(&(g.adjoint() * &pm * &g), k).expect("Clifford image");
                    bw[local_index(&p)] = (q, real_sign(s));
                }
                forward[kind_index(kind)] = fw;
                backward[kind_index(kind)] = bw;
            }
            SignedTables { forward, backward }
        })
    }

    /// `(P', s)` with `G P G† = s P'` for a local Pauli.
    pub fn forward(&self, kind: GateKind, local: &PauliString) -> &(PauliString, i8) {
        &self.forward[kind_index(kind)][local_index(local)]
    }

    /// `(P', s)` with `G† P G = s P'`.
    pub fn backward(&self, kind: GateKind, local: &PauliString) -> &(PauliString, i8) {
        &self.backward[kind_index(kind)][local_index(local)]
    }
}

fn real_sign(s: Complex64) -> i8 {
    assert!(s.im.abs() < 1e-9, "Hermitian Pauli maps to Hermitian Pauli");
    if s.re > 0.0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCheckEntry {
    pub gate: String,
    pub input: String,
    pub table: String,
    pub dense: String,
    /// Sign of the dense image `G P G†`.
    pub sign: i8,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCheckReport {
    pub entries: Vec<TableCheckEntry>,
    pub notes: Vec<String>,
}

impl TableCheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn mismatches(&self) -> Vec<&TableCheckEntry> {
        self.entries.iter().filter(|e| !e.ok).collect()
    }

    pub fn count(&self, arity: usize) -> usize {
        self.entries.iter().filter(|e| e.input.len() == arity).count()
    }
}

impl fmt::Display for TableCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} entries checked, {} mismatches", self.entries.len(), self.mismatches().len())?;
        for e in self.mismatches() {
            writeln!(f, "  MISMATCH {} {} -> table {} / dense {}", e.gate, e.input, e.table, e.dense)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Compare every lookup entry with dense conjugation `G P G†` (phase stripped).
pub fn table_self_check() -> TableCheckReport {
    table_self_check_with(Tables::standard())
}

pub fn table_self_check_with(tables: &Tables) -> TableCheckReport {
    let signed = SignedTables::get();
    let mut entries = Vec::new();
    for kind in GateKind::CLIFFORD_1Q {
        for l in Letter::ALL {
            let input = PauliString::from_letters(&[l]);
            let table = PauliString::from_letters(&[tables.one_qubit(kind, l)]);
            let (dense, sign) = signed.forward(kind, &input).clone();
            entries.push(TableCheckEntry {
                gate: kind.name().into(),
                input: input.to_string(),
                table: table.to_string(),
                dense: dense.to_string(),
                sign,
                ok: table == dense,
            });
        }
    }
    for kind in GateKind::CLIFFORD_2Q {
        // Local operator order: bit 0 = qubits[0], bit 1 = qubits[1] with qubits = [0, 1].
        let [ta, tb] = Tables::table_qubits(kind, &[0, 1]);
        for a in Letter::ALL {
            for b in Letter::ALL {
                let mut input = PauliString::identity(2);
                input.set(ta, a);
                input.set(tb, b);
                let out = tables.two_qubit(kind, a, b);
                let mut table = PauliString::identity(2);
                table.set(ta, out[0]);
                table.set(tb, out[1]);
                let (dense, sign) = signed.forward(kind, &input).clone();
                entries.push(TableCheckEntry {
                    gate: kind.name().into(),
                    input: format!("{}{}", a.as_char(), b.as_char()),
                    table: format!("{}{}", out[0].as_char(), out[1].as_char()),
                    dense: format!("{}{}", dense.letter(ta).as_char(), dense.letter(tb).as_char()),
                    sign,
                    ok: table == dense,
                });
            }
        }
    }
    let mut notes =
        vec!["two-qubit letters are listed in table order; for cx the first letter is the target and the second the control".to_string()];
    let sy: Vec<&TableCheckEntry> = entries.iter().filter(|e| e.gate == "sy").collect();
    let h: Vec<&TableCheckEntry> = entries.iter().filter(|e| e.gate == "h").collect();
    let same_as_h = sy.iter().zip(&h).all(|(a, b)| a.table == b.table);
    if same_as_h {
        let signed: Vec<String> = sy
            .iter()
            .filter(|e| e.input != "I")
            .map(|e| format!("{}->{}{}", e.input, if e.sign < 0 { "-" } else { "" }, e.dense))
            .collect();
        notes.push(format!(
            "sy table is identical to the h table; it agrees with sqrt(Y) conjugation only up to sign ({})",
            signed.join(", ")
        ));
    }
    TableCheckReport { entries, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_check_passes() {
        let r = table_self_check();
        assert!(r.passed(), "{r}");
        assert_eq!(r.count(1), 28);
        assert_eq!(r.count(2), 48);
        assert!(r.notes.iter().any(|n| n.contains("sy table")));
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let mut t = Tables::standard().clone();
        t.set_one_qubit(GateKind::H, Letter::X, Letter::Y);
        t.set_two_qubit(GateKind::Cz, [Letter::X, Letter::X], [Letter::X, Letter::X]);
        let r = table_self_check_with(&t);
        assert!(!r.passed());
        assert_eq!(r.mismatches().len(), 2);
    }

    #[test]
    fn sy_sign_is_negative_on_x() {
        let s = SignedTables::get();
        let (q, sign) = s.forward(GateKind::Sy, &PauliString::from_letters(&[Letter::X]));
        assert_eq!(q.to_string(), "Z");
        assert_eq!(*sign, -1);
    }

    #[test]
    fn inverse_conjugation_agrees_phase_free() {
        let s = SignedTables::get();
        for kind in GateKind::CLIFFORD_1Q.iter().chain(&GateKind::CLIFFORD_2Q) {
            for p in PauliString::all(kind.arity()) {
                assert_eq!(s.forward(*kind, &p).0, s.backward(*kind, &p).0, "{kind} {p}");
            }
        }
    }

    #[test]
    fn tables_are_permutations_and_swap_keeps_weight() {
        let t = Tables::standard();
        for kind in GateKind::CLIFFORD_1Q {
            let mut seen = [false; 4];
            for l in Letter::ALL {
                seen[t.one_qubit(kind, l).rank() as usize] = true;
            }
            assert!(seen.iter().all(|&s| s), "{kind}");
        }
        for kind in GateKind::CLIFFORD_2Q {
            let mut seen = [false; 16];
            for a in Letter::ALL {
                for b in Letter::ALL {
                    let o = t.two_qubit(kind, a, b);
                    seen[4 * o[0].rank() as usize + o[1].rank() as usize] = true;
                    if kind == GateKind::Swap {
                        let w = |x: Letter, y: Letter| (x != Letter::I) as u8 + (y != Letter::I) as u8;
                        assert_eq!(w(a, b), w(o[0], o[1]));
                    }
                }
            }
            assert!(seen.iter().all(|&s| s), "{kind}");
        }
    }
}
