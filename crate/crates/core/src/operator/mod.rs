//! Dense complex operator algebra.

mod eig;
mod matrix;
mod pauli;

pub use eig::{hermitian_eig, trace_norm, HermitianEigen};
pub use matrix::{conjugate_local, embed, kron, partial_trace, ComplexMatrix};
pub(crate) use matrix::{check_targets, kron2};
pub use pauli::{from_pauli_expectations, pauli_expectations, pauli_matrix, PauliLabel, PauliString};
