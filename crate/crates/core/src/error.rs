use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("gate {0} is not Clifford; use conjugate_through_rotation")]
    NotClifford(String),

    #[error("channel is not invertible: zero Pauli eigenvalue on {pauli}")]
    NotInvertible { pauli: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("layer index {index} out of range (circuit has {len} layers)")]
    LayerOutOfRange { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
