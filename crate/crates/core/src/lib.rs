//! Pseudo-density matrices over schedules of Pauli measurement events.
//!
//! A [`Schedule`] places single-qubit Pauli measurement events on qubits and
//! time slices, with noise channels acting between slices. From it
//! [`build_pdm`] assembles the pseudo-density matrix
//!
//! ```text
//! R = 2^-n Σ ⟨σ_{i_1} … σ_{i_n}⟩ σ_{i_1} ⊗ … ⊗ σ_{i_n}
//! ```
//!
//! which is Hermitian with unit trace but need not be positive semi-definite
//! once events are timelike separated. [`causality::f_tr`] measures the
//! departure from positivity as `‖R‖_tr − 1`.
//!
//! ```
//! use pdm_core::{build_pdm, causality, DensityState, KrausChannel, Schedule};
//!
//! let ket0 = DensityState::from_bloch([0.0, 0.0, 1.0]).unwrap();
//! let schedule = Schedule::timelike(ket0, KrausChannel::identity(1)).unwrap();
//! let pdm = build_pdm(&schedule).unwrap();
//! assert!((causality::f_tr(&pdm) - 1.0).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod causality;
pub mod channel;
mod error;
pub mod operator;
pub mod par;
pub mod random;
pub mod schedule;
pub mod svg;
pub mod sweep;
pub mod verify;

pub use channel::{DensityState, KrausChannel, NoiseModel, StandardChannel};
pub use error::{Error, Result};
pub use operator::{ComplexMatrix, PauliLabel, PauliString};
pub use par::Exec;
pub use schedule::{build_pdm, Event, PauliAssignment, PseudoDensityMatrix, Schedule};

/// Elementwise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Shared positivity tolerance for channel validation and PDM classification.
pub const PSD_TOL: f64 = 1e-10;
