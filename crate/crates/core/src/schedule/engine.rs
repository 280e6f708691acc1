use super::{PauliAssignment, Schedule};
use crate::operator::PauliString;
use crate::Result;

/// Exact expectation of the product of the ±1 outcomes of the assigned measurements.
///
/// Measuring a Pauli `A` and weighting by its outcome maps the unnormalized
/// state through `Σ_{a=±1} a·P_a ρ P_a = (Aρ + ρA)/2`, so the whole schedule
/// collapses to a single operator whose trace is the expectation. Identity
/// labels mean no measurement: outcome +1, state untouched.
pub fn expectation(s: &Schedule, a: &PauliAssignment) -> Result<f64> {
    s.check_assignment(a)?;
    let n = s.qubit_count();
    let labels = a.labels();
    let measured = |slice: usize| s.slice_events(slice).any(|e| !labels[e.id - 1].is_identity());

    // Trailing slices without measurements only apply trace-preserving maps.
    let Some(last) = (0..s.slice_count()).rev().find(|&k| measured(k)) else {
        return Ok(s.initial_state().matrix().trace().re);
    };

    let mut op = s.initial_state().matrix().clone();
    for slice in 0..=last {
        if slice > 0 {
            op = s.gaps()[slice - 1].apply(&op, n)?;
        }
        for e in s.slice_events(slice) {
            let label = labels[e.id - 1];
            if !label.is_identity() {
                op = PauliString::single(n, e.qubit, label).half_anticommutator(&op)?;
            }
        }
    }
    Ok(op.trace().re)
}
