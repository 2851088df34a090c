use std::hash::Hash;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::gf2::{solve_symplectic, Span};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Coefficients at or below this magnitude are not stored.
pub const ZERO_TOL: f64 = 1e-300;
/// Largest span dimension handled by the eigenvalue transform.
pub const MAX_SPAN_DIM: usize = 24;

/// Pauli channel `ρ ↦ Σ c_P P ρ P` as a sparse coefficient map.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePauliChannel {
    pub n_qubits: usize,
    pub terms: IndexMap<PauliString, f64>,
}

impl DensePauliChannel {
    pub fn identity(n_qubits: usize) -> Self {
        let mut terms = IndexMap::new();
        terms.insert(PauliString::identity(n_qubits), 1.0);
        DensePauliChannel { n_qubits, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (PauliString, f64)>>(n_qubits: usize, terms: I) -> Result<Self> {
        let mut map: IndexMap<PauliString, f64> = IndexMap::new();
        for (p, c) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch(n_qubits, p.n_qubits()));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite coefficient on {p}")));
            }
            *map.entry(p).or_insert(0.0) += c;
        }
        map.retain(|_, c| c.abs() > ZERO_TOL);
        Ok(DensePauliChannel { n_qubits, terms: map })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    pub fn trace(&self) -> f64 {
        self.terms.values().sum()
    }

    /// Σ|c|, the sampling overhead.
    pub fn gamma(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn is_forward(&self, tol: f64) -> bool {
        self.terms.values().all(|&c| c >= -tol) && (self.trace() - 1.0).abs() <= tol
    }

    /// Pauli eigenvalue on `q`: Σ_P c_P (−1)^⟨P,q⟩.
    pub fn pauli_fidelity(&self, q: &PauliString) -> f64 {
        self.terms.iter().map(|(p, c)| if p.commutes_unchecked(q) { *c } else { -*c }).sum()
    }

    pub fn multiply(&self, other: &DensePauliChannel) -> Result<DensePauliChannel> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        let terms = convolve(&self.terms, &other.terms, |a, b| {
            let mut k = a.clone();
            k.mul_assign(b);
            k
        });
        Ok(DensePauliChannel { n_qubits: self.n_qubits, terms })
    }

    /// Drop terms with |c| < epsilon; returns the removed absolute mass. No renormalization.
    pub fn truncate(&self, epsilon: f64) -> (DensePauliChannel, f64) {
        let mut dropped = 0.0;
        let mut terms = IndexMap::with_capacity(self.terms.len());
        for (p, &c) in &self.terms {
            if c.abs() < epsilon {
                dropped += c.abs();
            } else {
                terms.insert(p.clone(), c);
            }
        }
        (DensePauliChannel { n_qubits: self.n_qubits, terms }, dropped)
    }

    /// Apply XI-reduction to every key, adding colliding coefficients.
    pub fn xi_reduce(&self) -> DensePauliChannel {
        let mut terms: IndexMap<PauliString, f64> = IndexMap::with_capacity(self.terms.len());
        for (p, &c) in &self.terms {
            *terms.entry(p.xi_reduce()).or_insert(0.0) += c;
        }
        terms.retain(|_, c| c.abs() > ZERO_TOL);
        DensePauliChannel { n_qubits: self.n_qubits, terms }
    }

    /// Union of the qubit supports of all terms.
    pub fn support_mask(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.n_qubits.div_ceil(64).max(1)];
        for p in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(p.support()) {
                *a |= b;
            }
        }
        m
    }

    pub fn invert(&self) -> Result<DensePauliChannel> {
        invert_dense(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DenseRepr::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<DensePauliChannel> {
        let r: DenseRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        DensePauliChannel::from_terms(r.n_qubits, r.terms.into_iter().map(|t| (t.pauli, t.coef)))
    }
}

/// `out[k] = Σ_{mul(i,j)=k} a_i b_j` over an arbitrary key type.
pub fn convolve<K, F>(a: &IndexMap<K, f64>, b: &IndexMap<K, f64>, mul: F) -> IndexMap<K, f64>
where
    K: Hash + Eq + Clone,
    F: Fn(&K, &K) -> K,
{
    let mut out: IndexMap<K, f64> = IndexMap::with_capacity(a.len().max(b.len()));
    for (ka, &ca) in a {
        for (kb, &cb) in b {
            *out.entry(mul(ka, kb)).or_insert(0.0) += ca * cb;
        }
    }
    out.retain(|_, c| c.abs() > ZERO_TOL);
    out
}

/// In-place Walsh–Hadamard transform (unnormalized).
pub fn walsh_hadamard(v: &mut [f64]) {
    let n = v.len();
    assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Inverse channel via reciprocal Pauli eigenvalues on the group generated by the support.
pub fn invert_dense(c: &DensePauliChannel) -> Result<DensePauliChannel> {
    let mut span = Span::new();
    let coords: Vec<u64> = c.terms.keys().map(|p| span.insert(p)).collect();
    let k = span.dim();
    if k > MAX_SPAN_DIM {
        return Err(Error::Capacity(format!("channel support generates a group of dimension {k} (limit {MAX_SPAN_DIM})")));
    }
    let size = 1usize << k;
    let mut f = vec![0.0; size];
    for (a, &coef) in coords.iter().zip(c.terms.values()) {
        f[*a as usize] += coef;
    }
    walsh_hadamard(&mut f);
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (b, v) in f.iter_mut().enumerate() {
        if v.abs() <= 1e-12 * scale.max(1.0) {
            let q = solve_symplectic(&span.generators, b as u64).unwrap_or_else(|| PauliString::identity(c.n_qubits));
            return Err(Error::NotInvertible { pauli: q.to_string() });
        }
        *v = 1.0 / *v;
    }
    walsh_hadamard(&mut f);
    let norm = size as f64;
    let mut terms = IndexMap::with_capacity(size);
    let mut cur = PauliString::identity(c.n_qubits);
    let mut prev_gray = 0usize;
    for i in 0..size {
        let gray = i ^ (i >> 1);
        if i > 0 {
            let changed = (gray ^ prev_gray).trailing_zeros() as usize;
            cur.mul_assign(&span.generators[changed]);
        }
        prev_gray = gray;
        let v = f[gray] / norm;
        if v.abs() > ZERO_TOL {
            terms.insert(cur.clone(), v);
        }
    }
    Ok(DensePauliChannel { n_qubits: c.n_qubits, terms })
}

/// Uniform 2-qubit (or n-qubit) depolarizing channel.
pub fn depolarizing_channel(p: f64, n: usize) -> Result<DensePauliChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("depolarizing probability {p} outside [0, 1]")));
    }
    if n == 0 || n > 8 {
        return Err(Error::InvalidParameter(format!("depolarizing channel on {n} qubits")));
    }
    let others = (1usize << (2 * n)) - 1;
    let terms = PauliString::all(n).map(|q| {
        let c = if q.is_identity() { 1.0 - p } else { p / others as f64 };
        (q, c)
    });
    DensePauliChannel::from_terms(n, terms)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DenseTermRepr {
    pub pauli: PauliString,
    pub coef: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DenseRepr {
    pub n_qubits: usize,
    pub terms: Vec<DenseTermRepr>,
}

impl From<&DensePauliChannel> for DenseRepr {
    fn from(c: &DensePauliChannel) -> DenseRepr {
        DenseRepr { n_qubits: c.n_qubits, terms: c.terms.iter().map(|(p, &coef)| DenseTermRepr { pauli: p.clone(), coef }).collect() }
    }
}
