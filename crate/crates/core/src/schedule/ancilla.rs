use num_complex::Complex64;

use super::{PauliAssignment, Schedule};
use crate::operator::{embed, kron2, pauli_matrix, ComplexMatrix, PauliLabel};
use crate::{Error, Result};

const PRIMARY: usize = 0;
const ANCILLA: usize = 1;

/// Unitary mapping the ±1 eigenstates of `label` onto those of `Z`
/// (`U σ U† = Z`): `H` for `X`, `H·S†` for `Y`, identity otherwise.
pub fn basis_change(label: PauliLabel) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let hadamard = ComplexMatrix::from_rows(vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]])
        .expect("2x2");
    match label {
        PauliLabel::X => hadamard,
        PauliLabel::Y => {
            let s_dag = ComplexMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, -1.0)]])
                .expect("2x2");
            &hadamard * &s_dag
        }
        PauliLabel::I | PauliLabel::Z => ComplexMatrix::identity(2),
    }
}

fn cnot_primary_to_ancilla() -> ComplexMatrix {
    let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
    &kron2(&p0, &ComplexMatrix::identity(2)) + &kron2(&p1, &pauli_matrix(PauliLabel::X))
}

/// Two-event correlation recovered from a single ancilla readout.
///
/// The ancilla starts in `|0⟩`; each measured event applies `U_σ`, a CNOT from
/// the primary onto the ancilla and `U_σ†`, so the ancilla accumulates the
/// parity of both outcomes. The gap channel acts on the primary only. Returns
/// `⟨Z⟩` of the ancilla.
pub fn ancilla_expectation(s: &Schedule, a: &PauliAssignment) -> Result<f64> {
    s.check_assignment(a)?;
    if s.qubit_count() != 1 || s.event_count() != 2 || s.slice_count() != 2 {
        return Err(Error::InvalidArgument(
            "ancilla protocol needs one qubit measured in two consecutive slices".into(),
        ));
    }
    let ket0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let mut rho = kron2(s.initial_state().matrix(), &ket0);
    let cnot = cnot_primary_to_ancilla();

    for slice in 0..2 {
        if slice == 1 {
            // the primary is qubit 0 of both the schedule and the two-qubit register
            rho = s.gaps()[0].apply(&rho, 2)?;
        }
        for e in s.slice_events(slice) {
            let label = a.labels()[e.id - 1];
            if label.is_identity() {
                continue;
            }
            let u = embed(&basis_change(label), 2, &[PRIMARY])?;
            let gate = &(&u.adjoint() * &cnot) * &u;
            rho = gate.conjugate(&rho);
        }
    }
    let z_anc = embed(&pauli_matrix(PauliLabel::Z), 2, &[ANCILLA])?;
    Ok(z_anc.trace_product(&rho).re)
}
