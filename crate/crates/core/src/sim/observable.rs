use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableTerm {
    pub coef: f64,
    pub pauli: PauliString,
}

/// Weighted sum of Pauli strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObservableSpec {
    pub terms: Vec<ObservableTerm>,
}

impl ObservableSpec {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<ObservableSpec> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("observable needs at least one term".into()));
        }
        let n = terms[0].1.n_qubits();
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.n_qubits() != n) {
            return Err(Error::DimensionMismatch(n, p.n_qubits()));
        }
        Ok(ObservableSpec { terms: terms.into_iter().map(|(coef, pauli)| ObservableTerm { coef, pauli }).collect() })
    }

    pub fn single(p: PauliString) -> ObservableSpec {
        ObservableSpec::new(vec![(1.0, p)]).expect("one term")
    }

    /// Average of a letter over all qubits, e.g. the magnetization along Z.
    pub fn magnetization(n_qubits: usize, letter: crate::pauli::Letter) -> ObservableSpec {
        let w = 1.0 / n_qubits as f64;
        ObservableSpec::new((0..n_qubits).map(|q| (w, PauliString::single(n_qubits, q, letter))).collect()).expect("nonempty")
    }

    pub fn n_qubits(&self) -> usize {
        self.terms[0].pauli.n_qubits()
    }

    pub fn paulis(&self) -> Vec<PauliString> {
        self.terms.iter().map(|t| t.pauli.clone()).collect()
    }

    pub fn combine(&self, values: &[f64]) -> f64 {
        self.terms.iter().zip(values).map(|(t, v)| t.coef * v).sum()
    }

    pub fn check(&self, n_qubits: usize) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidParameter("observable needs at least one term".into()));
        }
        if self.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch(n_qubits, self.n_qubits()));
        }
        Ok(())
    }
}
