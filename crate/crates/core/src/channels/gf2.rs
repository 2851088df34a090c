//! Linear algebra over GF(2) on symplectic Pauli vectors.

use crate::pauli::PauliString;

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    (words[i / 64] >> (i % 64)) & 1 == 1
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn xor(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= *y;
    }
}

/// Basis of the group generated by a set of Paulis, with coordinates.
pub struct Span {
    /// Independent generators, in discovery order.
    pub generators: Vec<PauliString>,
    rows: Vec<(Vec<u64>, usize, u64)>,
}

impl Span {
    pub fn new() -> Span {
        Span { generators: Vec::new(), rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    fn reduce(&self, p: &PauliString) -> (Vec<u64>, u64) {
        let mut v = p.raw_words().to_vec();
        let mut coords = 0u64;
        for (row, pivot, c) in &self.rows {
            if bit(&v, *pivot) {
                xor(&mut v, row);
                coords ^= c;
            }
        }
        (v, coords)
    }

    /// Add `p`; returns its coordinate vector over the generators.
    pub fn insert(&mut self, p: &PauliString) -> u64 {
        let (v, coords) = self.reduce(p);
        match first_bit(&v) {
            None => coords,
            Some(pivot) => {
                let j = self.generators.len();
                assert!(j < 64, "span dimension limited to 64");
                self.generators.push(p.clone());
                // residual = p ^ (rows in coords) so in generator coordinates it is e_j ^ coords
                self.rows.push((v, pivot, coords ^ (1u64 << j)));
                1u64 << j
            }
        }
    }

    /// Coordinates of `p`, or `None` when outside the span.
    pub fn coords(&self, p: &PauliString) -> Option<u64> {
        let (v, coords) = self.reduce(p);
        first_bit(&v).is_none().then_some(coords)
    }
}

impl Default for Span {
    fn default() -> Self {
        Span::new()
    }
}

/// A Pauli `Q` whose symplectic products with `gens[i]` equal bit i of `target`.
pub fn solve_symplectic(gens: &[PauliString], target: u64) -> Option<PauliString> {
    let n = gens.first()?.n_qubits();
    let nw = gens[0].raw_words().len() / 2;
    // ⟨g, Q⟩ = g.x·Q.z + g.z·Q.x, i.e. an ordinary dot product with g's halves swapped.
    let mut rows: Vec<(Vec<u64>, bool)> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let w = g.raw_words();
            let mut v = w[nw..].to_vec();
            v.extend_from_slice(&w[..nw]);
            (v, (target >> i) & 1 == 1)
        })
        .collect();
    let total_bits = 2 * nw * 64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..total_bits {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| bit(&rows[i].0, col)) else {
            continue;
        };
        rows.swap(r, sel);
        let (pv, pb) = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(&row.0, col) {
                xor(&mut row.0, &pv);
                row.1 ^= pb;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1) {
        return None;
    }
    let mut q = PauliString::identity(n);
    let qw = q.raw_words_mut();
    for (i, &col) in pivots.iter().enumerate() {
        if rows[i].1 {
            qw[col / 64] |= 1u64 << (col % 64);
        }
    }
    Some(q)
}
