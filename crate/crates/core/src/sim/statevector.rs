use num_complex::Complex64;

use crate::clifford::{clifford_matrix, Axis, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{c, i_pow, CMat, ONE, ZERO};
use crate::pauli::PauliString;

pub const MAX_STATEVECTOR_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

/// `exp(-i θ A / 2)`
pub fn rotation_matrix(axis: Axis, theta: f64) -> CMat {
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let a = crate::linalg::pauli_matrix(&PauliString::from_letters(&[axis.letter()]));
    CMat::identity(2, 2).map(|v| v * cs) - a.map(|v| v * c(0.0, sn))
}

/// Local unitary of any gate given the circuit's (possibly sign-flipped) angles.
pub fn gate_matrix(g: &Gate, angles: &[f64]) -> CMat {
    match g.rotation {
        Some(r) => rotation_matrix(r.axis, angles[r.angle_id]),
        None => clifford_matrix(g.kind),
    }
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Result<StateVector> {
        if n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::Capacity(format!("statevector limited to {MAX_STATEVECTOR_QUBITS} qubits, got {n_qubits}")));
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = ONE;
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<StateVector> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("amplitude count {len} is not a power of two")));
        }
        let s = StateVector { n_qubits: len.trailing_zeros() as usize, amplitudes };
        if (s.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter("state is not normalized".into()));
        }
        Ok(s)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_matrix(&mut self, m: &CMat, qubits: &[usize]) {
        match qubits.len() {
            1 => {
                let bit = 1usize << qubits[0];
                let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
                for i in 0..self.amplitudes.len() {
                    if i & bit == 0 {
                        let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
                        self.amplitudes[i] = m00 * a + m01 * b;
                        self.amplitudes[i | bit] = m10 * a + m11 * b;
                    }
                }
            }
            2 => {
                let (b0, b1) = (1usize << qubits[0], 1usize << qubits[1]);
                let idx = [0, b0, b1, b0 | b1];
                for i in 0..self.amplitudes.len() {
                    if i & (b0 | b1) == 0 {
                        let v: [Complex64; 4] = std::array::from_fn(|k| self.amplitudes[i | idx[k]]);
                        for r in 0..4 {
                            self.amplitudes[i | idx[r]] = (0..4).map(|k| m[(r, k)] * v[k]).sum();
                        }
                    }
                }
            }
            k => panic!("apply_matrix on {k} qubits"),
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, angles: &[f64]) {
        if matches!(g.kind, GateKind::X | GateKind::Y | GateKind::Z) {
            let l = match g.kind {
                GateKind::X => crate::pauli::Letter::X,
                GateKind::Y => crate::pauli::Letter::Y,
                _ => crate::pauli::Letter::Z,
            };
            self.apply_pauli(&PauliString::single(self.n_qubits, g.qubits[0], l));
            return;
        }
        self.apply_matrix(&gate_matrix(g, angles), &g.qubits);
    }

    /// Apply the Hermitian Pauli operator `p`.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        if p.is_identity() {
            return;
        }
        let (x, z) = p.masks();
        let (x, z) = (x as usize, z as usize);
        let phase = i_pow(((x & z).count_ones() % 4) as u8);
        let old = self.amplitudes.clone();
        for (b, a) in old.into_iter().enumerate() {
            let s = if (b & z).count_ones() % 2 == 1 { -phase } else { phase };
            self.amplitudes[b ^ x] = s * a;
        }
    }

    /// ⟨ψ|P|ψ⟩
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, p.n_qubits()));
        }
        let (x, z) = p.masks();
        let (x, z) = (x as usize, z as usize);
        let phase = i_pow(((x & z).count_ones() % 4) as u8);
        let mut acc = ZERO;
        for (b, a) in self.amplitudes.iter().enumerate() {
            let s = if (b & z).count_ones() % 2 == 1 { -phase } else { phase };
            acc += self.amplitudes[b ^ x].conj() * s * a;
        }
        debug_assert!(acc.im.abs() < 1e-10, "Hermitian expectation has imaginary part {}", acc.im);
        Ok(acc.re)
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        self.amplitudes.iter().enumerate().filter(|(b, _)| (b >> q) & 1 == 1).map(|(_, a)| a.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::p;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_state() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(&Gate::h(0), &[]);
        s.apply_gate(&Gate::cx(0, 1), &[]);
        let expect = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, e) in s.amplitudes.iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-12);
        }
        assert!((s.pauli_expectation(&p("XX")).unwrap() - 1.0).abs() < 1e-12);
        assert!((s.pauli_expectation(&p("ZZ")).unwrap() - 1.0).abs() < 1e-12);
        assert!((s.pauli_expectation(&p("YY")).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn basic_expectations() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(s.pauli_expectation(&p("Z")).unwrap(), 1.0);
        let mut plus = s.clone();
        plus.apply_gate(&Gate::h(0), &[]);
        assert!((plus.pauli_expectation(&p("X")).unwrap() - 1.0).abs() < 1e-12);
        assert!(StateVector::zero(21).is_err());
    }

    #[test]
    fn rotation_about_x() {
        let theta = 0.7;
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::rot(Axis::X, 0, 0), &[theta]);
        assert!((s.pauli_expectation(&p("Z")).unwrap() - theta.cos()).abs() < 1e-12);
        assert!((s.pauli_expectation(&p("Y")).unwrap() + theta.sin()).abs() < 1e-12);
    }
}
