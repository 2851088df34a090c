//! Pauli-channel algebra, Clifford propagation and probabilistic error
//! cancellation with fused, propagated inverses.

pub mod channels;
pub mod clifford;
pub mod error;
pub mod linalg;
pub mod pauli;
pub mod pec;
pub mod sim;

pub use channels::{DensePauliChannel, SplChannel, SplTerm};
pub use clifford::{Axis, Circuit, Gate, GateKind, Layer, SignFlipMask};
pub use error::{Error, Result};
pub use pauli::{Letter, PauliString};
