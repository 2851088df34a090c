use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::dense::{DensePauliChannel, DenseRepr, ZERO_TOL};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// One factor `w·I + (1−w)·P`, or its inverse `(w·I − (1−w)·P)/(2w−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplTerm {
    pub w: f64,
    pub pauli: PauliString,
    pub inverted: bool,
    pub rate: Option<f64>,
}

impl SplTerm {
    pub fn forward(pauli: PauliString, w: f64) -> SplTerm {
        SplTerm { w, pauli, inverted: false, rate: None }
    }

    /// Term whose Pauli fidelity on anticommuting strings is `f`.
    pub fn from_fidelity(pauli: PauliString, f: f64) -> SplTerm {
        SplTerm { w: (1.0 + f) / 2.0, pauli, inverted: false, rate: (f > 0.0).then(|| -f.ln() / 2.0) }
    }

    pub fn inverse(&self) -> SplTerm {
        SplTerm { inverted: !self.inverted, ..self.clone() }
    }

    fn check(&self) -> Result<()> {
        if !(self.w > 0.5 && self.w <= 1.0) {
            return Err(Error::InvalidParameter(format!("SPL weight {} on {} outside (1/2, 1]", self.w, self.pauli)));
        }
        Ok(())
    }

    /// Overhead of this factor: (2w−1)⁻¹ when inverted, 1 otherwise.
    pub fn gamma(&self) -> f64 {
        if self.inverted {
            1.0 / (2.0 * self.w - 1.0)
        } else {
            1.0
        }
    }

    /// Coefficients on (I, P).
    pub fn coefficients(&self) -> (f64, f64) {
        if self.inverted {
            let d = 2.0 * self.w - 1.0;
            (self.w / d, -(1.0 - self.w) / d)
        } else {
            (self.w, 1.0 - self.w)
        }
    }

    pub fn to_dense(&self) -> DensePauliChannel {
        let (a, b) = self.coefficients();
        DensePauliChannel::from_terms(self.pauli.n_qubits(), [(PauliString::identity(self.pauli.n_qubits()), a), (self.pauli.clone(), b)])
            .expect("consistent dimensions")
    }

    /// Eigenvalue on `q`.
    pub fn fidelity(&self, q: &PauliString) -> f64 {
        if self.pauli.commutes_unchecked(q) {
            1.0
        } else if self.inverted {
            1.0 / (2.0 * self.w - 1.0)
        } else {
            2.0 * self.w - 1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionStrategy {
    LexicographicSupport,
    PlainOrder,
}

/// Product of commuting SPL factors followed by partially expanded sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SplChannel {
    pub n_qubits: usize,
    pub product_terms: Vec<SplTerm>,
    pub expanded_factors: Vec<DensePauliChannel>,
}

impl SplChannel {
    pub fn identity(n_qubits: usize) -> SplChannel {
        SplChannel { n_qubits, product_terms: Vec::new(), expanded_factors: Vec::new() }
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<SplTerm>) -> Result<SplChannel> {
        for t in &terms {
            if t.pauli.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch(n_qubits, t.pauli.n_qubits()));
            }
            t.check()?;
        }
        Ok(SplChannel { n_qubits, product_terms: terms, expanded_factors: Vec::new() })
    }

    pub fn from_dense(c: DensePauliChannel) -> SplChannel {
        SplChannel { n_qubits: c.n_qubits, product_terms: Vec::new(), expanded_factors: vec![c] }
    }

    pub fn is_identity(&self) -> bool {
        self.product_terms.is_empty() && self.expanded_factors.iter().all(|f| f.len() == 1 && f.terms.keys().all(|k| k.is_identity()))
    }

    /// Append all factors of `other`.
    pub fn extend(&mut self, other: SplChannel) {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.product_terms.extend(other.product_terms);
        self.expanded_factors.extend(other.expanded_factors);
    }

    /// Total overhead: Π term overheads × Π factor Σ|c|.
    pub fn gamma(&self) -> Result<f64> {
        let mut g = 1.0;
        for t in &self.product_terms {
            t.check()?;
            g *= t.gamma();
        }
        for f in &self.expanded_factors {
            g *= f.gamma();
        }
        Ok(g)
    }

    pub fn inverse(&self) -> Result<SplChannel> {
        Ok(SplChannel {
            n_qubits: self.n_qubits,
            product_terms: self.product_terms.iter().map(SplTerm::inverse).collect(),
            expanded_factors: self.expanded_factors.iter().map(|f| f.invert()).collect::<Result<_>>()?,
        })
    }

    pub fn pauli_fidelity(&self, q: &PauliString) -> f64 {
        self.product_terms.iter().map(|t| t.fidelity(q)).product::<f64>()
            * self.expanded_factors.iter().map(|f| f.pauli_fidelity(q)).product::<f64>()
    }

    /// Full expansion into one dense channel.
    pub fn to_dense(&self) -> DensePauliChannel {
        let mut acc = DensePauliChannel::identity(self.n_qubits);
        for t in &self.product_terms {
            acc = multiply_by_term(&acc, t);
        }
        for f in &self.expanded_factors {
            acc = acc.multiply(f).expect("consistent dimensions");
        }
        acc
    }

    /// Merge factors that share the same Pauli and inversion flag.
    pub fn merge_equal_terms(&self) -> SplChannel {
        let mut merged: IndexMap<(PauliString, bool), SplTerm> = IndexMap::new();
        for t in &self.product_terms {
            merged
                .entry((t.pauli.clone(), t.inverted))
                .and_modify(|m| {
                    m.w = m.w * t.w + (1.0 - m.w) * (1.0 - t.w);
                    m.rate = match (m.rate, t.rate) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    };
                })
                .or_insert_with(|| t.clone());
        }
        SplChannel {
            n_qubits: self.n_qubits,
            product_terms: merged.into_values().collect(),
            expanded_factors: self.expanded_factors.clone(),
        }
    }

    /// XI-reduce every Pauli and drop factors that became the identity.
    pub fn passive_reduction(&self) -> SplChannel {
        let product_terms = self
            .product_terms
            .iter()
            .filter_map(|t| {
                let r = t.pauli.xi_reduce();
                (!r.is_identity()).then(|| SplTerm { pauli: r, ..t.clone() })
            })
            .collect();
        let expanded_factors = self
            .expanded_factors
            .iter()
            .map(|f| f.xi_reduce())
            .filter(|f| !(f.len() == 1 && f.terms.keys().all(|k| k.is_identity())))
            .collect();
        SplChannel { n_qubits: self.n_qubits, product_terms, expanded_factors }
    }

    /// Absorb product terms into dense factors of at most `max_factor_terms` coefficients.
    pub fn expand_guided(&self, max_factor_terms: usize, strategy: ExpansionStrategy) -> SplChannel {
        let mut order: Vec<usize> = (0..self.product_terms.len()).collect();
        if strategy == ExpansionStrategy::LexicographicSupport {
            order.sort_by(|&a, &b| self.product_terms[a].pauli.lex_cmp_unchecked(&self.product_terms[b].pauli));
        }
        let mut remaining: Vec<Option<SplTerm>> = order.iter().map(|&i| Some(self.product_terms[i].clone())).collect();
        let mut head = 0usize;
        let mut alive = remaining.len();
        let mut factors = self.expanded_factors.clone();

        let next_alive = |remaining: &[Option<SplTerm>], from: usize| (from..remaining.len()).find(|&i| remaining[i].is_some());

        'outer: while alive >= 2 {
            let Some(i0) = next_alive(&remaining, head) else {
                break;
            };
            let Some(i1) = next_alive(&remaining, i0 + 1) else {
                break;
            };
            let t0 = remaining[i0].as_ref().unwrap();
            let t1 = remaining[i1].as_ref().unwrap();
            let mut factor = multiply_by_term(&t0.to_dense(), t1);
            if factor.len() > max_factor_terms {
                break 'outer;
            }
            let mut support: Vec<u64> = t0.pauli.support().iter().zip(t1.pauli.support()).map(|(a, b)| a | b).collect();
            remaining[i0] = None;
            remaining[i1] = None;
            alive -= 2;
            head = i0 + 1;
            while let Some(first) = next_alive(&remaining, head) {
                head = first;
                let pick = match strategy {
                    ExpansionStrategy::LexicographicSupport => (first..remaining.len())
                        .find(|&i| remaining[i].as_ref().is_some_and(|t| t.pauli.support_within(&support)))
                        .unwrap_or(first),
                    ExpansionStrategy::PlainOrder => first,
                };
                let t = remaining[pick].as_ref().unwrap();
                let next = multiply_by_term(&factor, t);
                if next.len() > max_factor_terms {
                    break;
                }
                for (a, b) in support.iter_mut().zip(t.pauli.support()) {
                    *a |= b;
                }
                factor = next;
                remaining[pick] = None;
                alive -= 1;
            }
            factors.push(factor);
        }
        SplChannel {
            n_qubits: self.n_qubits,
            product_terms: {
                let mut left: Vec<(usize, SplTerm)> = order.into_iter().zip(remaining).filter_map(|(i, t)| t.map(|t| (i, t))).collect();
                left.sort_by_key(|(i, _)| *i);
                left.into_iter().map(|(_, t)| t).collect()
            },
            expanded_factors: factors,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SplRepr {
            n_qubits: self.n_qubits,
            product_terms: self
                .product_terms
                .iter()
                .map(|t| SplTermRepr { pauli: t.pauli.clone(), w: t.w, inverted: t.inverted })
                .collect(),
            expanded_factors: self.expanded_factors.iter().map(DenseRepr::from).collect(),
        })
        .expect("serializable")
    }
}

/// `c · (a·I + b·P)`.
pub fn multiply_by_term(c: &DensePauliChannel, t: &SplTerm) -> DensePauliChannel {
    let (a, b) = t.coefficients();
    let mut terms: IndexMap<PauliString, f64> = IndexMap::with_capacity(2 * c.terms.len());
    for (k, &v) in &c.terms {
        *terms.entry(k.clone()).or_insert(0.0) += a * v;
    }
    for (k, &v) in &c.terms {
        let mut kp = k.clone();
        kp.mul_assign(&t.pauli);
        *terms.entry(kp).or_insert(0.0) += b * v;
    }
    terms.retain(|_, v| v.abs() > ZERO_TOL);
    DensePauliChannel { n_qubits: c.n_qubits, terms }
}

#[derive(Serialize)]
struct SplTermRepr {
    pauli: PauliString,
    w: f64,
    inverted: bool,
}

#[derive(Serialize)]
struct SplRepr {
    n_qubits: usize,
    product_terms: Vec<SplTermRepr>,
    expanded_factors: Vec<DenseRepr>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::p;

    fn inv(s: &str, w: f64) -> SplTerm {
        SplTerm::forward(p(s), w).inverse()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(SplChannel::identity(3).gamma().unwrap(), 1.0);
        let c = SplChannel::from_terms(1, vec![inv("X", 0.998)]).unwrap();
        assert!((c.gamma().unwrap() - 1.0 / 0.996).abs() < 1e-12);
        let bad = SplChannel { n_qubits: 1, product_terms: vec![inv("X", 0.5)], expanded_factors: vec![] };
        assert!(bad.gamma().is_err());
    }

    #[test]
    fn merge_examples() {
        let c = SplChannel::from_terms(1, vec![inv("X", 0.9), inv("X", 0.8)]).unwrap();
        let m = c.merge_equal_terms();
        assert_eq!(m.product_terms.len(), 1);
        assert!((m.product_terms[0].w - 0.74).abs() < 1e-15);
        assert!((m.gamma().unwrap() - 1.0 / 0.48).abs() < 1e-12);
        assert!((c.gamma().unwrap() - m.gamma().unwrap()).abs() < 1e-12);
        let d = SplChannel::from_terms(2, vec![inv("XI", 0.9), inv("IZ", 0.8)]).unwrap();
        assert_eq!(d.merge_equal_terms(), d);
    }

    #[test]
    fn passive_reduction_examples() {
        let c = SplChannel::from_terms(2, vec![inv("ZZ", 0.9), inv("XZ", 0.95)]).unwrap();
        let r = c.passive_reduction();
        assert_eq!(r.product_terms.len(), 1);
        assert_eq!(r.product_terms[0].pauli, p("XI"));
        assert!((c.gamma().unwrap() / r.gamma().unwrap() - 1.0 / 0.8).abs() < 1e-12);
        let k = SplChannel::from_terms(2, vec![inv("XI", 0.9), inv("IX", 0.8)]).unwrap();
        assert_eq!(k.passive_reduction(), k);
    }

    #[test]
    fn expansion_examples() {
        let c = SplChannel::from_terms(1, vec![inv("Z", 0.99), inv("X", 0.98), inv("Y", 0.97)]).unwrap();
        let none = c.expand_guided(1, ExpansionStrategy::LexicographicSupport);
        assert_eq!(none, c);
        let e = c.expand_guided(4096, ExpansionStrategy::LexicographicSupport);
        assert!(e.product_terms.is_empty());
        assert_eq!(e.expanded_factors.len(), 1);
        assert_eq!(e.expanded_factors[0].len(), 4);
        assert!(e.gamma().unwrap() <= c.gamma().unwrap());
        let full = c.to_dense();
        assert!((e.gamma().unwrap() - full.gamma()).abs() < 1e-12);
    }

    #[test]
    fn fidelity_of_model_pauli() {
        let f = 0.996;
        let c = SplChannel::from_terms(2, vec![SplTerm::from_fidelity(p("XX"), f)]).unwrap();
        assert!((c.to_dense().pauli_fidelity(&p("ZI")) - f).abs() < 1e-12);
        assert!((c.pauli_fidelity(&p("ZI")) - f).abs() < 1e-12);
        assert_eq!(c.pauli_fidelity(&p("XX")), 1.0);
    }
}
