//! Small dense complex matrices, used for gate definitions and as test oracles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::PauliString;

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `i^k`
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Full 2^n × 2^n matrix of a Pauli string; qubit q is bit q of the basis index.
pub fn pauli_matrix(p: &PauliString) -> CMat {
    let n = p.n_qubits();
    assert!(n <= 12, "dense Pauli matrix limited to 12 qubits");
    let dim = 1usize << n;
    let (x, z) = p.masks();
    let (x, z) = (x as usize, z as usize);
    let phase = i_pow(((x & z).count_ones() % 4) as u8);
    let mut m = CMat::zeros(dim, dim);
    for b in 0..dim {
        let sign = if (b & z).count_ones() % 2 == 1 { -ONE } else { ONE };
        m[(b ^ x, b)] = phase * sign;
    }
    m
}

/// Lift a k-qubit local operator acting on `qubits` (local bit i ↔ qubits[i]) to n qubits.
pub fn embed(local: &CMat, qubits: &[usize], n: usize) -> CMat {
    let dim = 1usize << n;
    let k = qubits.len();
    assert_eq!(local.nrows(), 1 << k);
    let mut m = CMat::zeros(dim, dim);
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    for col in 0..dim {
        let mut lc = 0usize;
        for (i, &q) in qubits.iter().enumerate() {
            lc |= ((col >> q) & 1) << i;
        }
        for lr in 0..(1usize << k) {
            let v = local[(lr, lc)];
            if v == ZERO {
                continue;
            }
            let mut row = col & !mask;
            for (i, &q) in qubits.iter().enumerate() {
                row |= ((lr >> i) & 1) << q;
            }
            m[(row, col)] += v;
        }
    }
    m
}

/// If `m` is a scalar multiple `s·P` of a Pauli string, return `(P, s)`.
pub fn as_scaled_pauli(m: &CMat, n: usize) -> Option<(PauliString, Complex64)> {
    let dim = (1usize << n) as f64;
    for p in PauliString::all(n) {
        let pm = pauli_matrix(&p);
        let overlap = (pm.adjoint() * m).trace() / dim;
        if (overlap.norm() - 1.0).abs() < 1e-9 {
            let residual = m - pm.map(|v| v * overlap);
            if residual.iter().all(|v| v.norm() < 1e-9) {
                return Some((p, overlap));
            }
        }
    }
    None
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::p;

    #[test]
    fn pauli_matrices_multiply_like_paulis() {
        let x = pauli_matrix(&p("X"));
        let z = pauli_matrix(&p("Z"));
        let y = pauli_matrix(&p("Y"));
        // XZ = -iY
        assert!(max_abs_diff(&(&x * &z), &y.map(|v| v * -I)) < 1e-12);
        let xy = pauli_matrix(&p("XY"));
        let yx = pauli_matrix(&p("YX"));
        let (q, s) = as_scaled_pauli(&(&xy * &yx), 2).unwrap();
        assert_eq!(q, p("ZZ"));
        assert!((s - ONE).norm() < 1e-12);
    }

    #[test]
    fn embedding_matches_pauli_matrix() {
        let x = pauli_matrix(&p("X"));
        let lifted = embed(&x, &[2], 3);
        assert!(max_abs_diff(&lifted, &pauli_matrix(&p("IIX"))) < 1e-12);
        let zx = pauli_matrix(&p("ZX"));
        let lifted = embed(&zx, &[2, 0], 3);
        assert!(max_abs_diff(&lifted, &pauli_matrix(&p("XIZ"))) < 1e-12);
    }
}
