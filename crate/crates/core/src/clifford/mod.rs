//! Gates, circuits and Pauli propagation through them.

mod circuit;
mod gate;
mod propagate;
mod tables;

pub use circuit::{Circuit, Layer, SignFlipMask};
pub use gate::{Axis, Gate, GateKind, Rotation};
pub use propagate::{
    conjugate_in_place, conjugate_pauli, conjugate_through_rotation, heisenberg_signed, propagate, propagate_forward,
    propagate_forward_in_place, propagate_in_place, schrodinger_signed,
};
pub use tables::{clifford_matrix, table_self_check, table_self_check_with, SignedTables, TableCheckEntry, TableCheckReport, Tables};
