use super::{PauliAssignment, Schedule};
use crate::operator::{embed, pauli_matrix, ComplexMatrix};
use crate::{Error, Result};

/// Branch enumeration is `2^k` in the number of non-identity labels.
pub const MAX_ORACLE_MEASUREMENTS: usize = 12;

/// Brute-force expectation by explicit enumeration of measurement branches.
///
/// Each ±1 outcome is a dense projector `(I ± A)/2`; every branch carries its
/// unnormalized post-measurement state, whose trace is the branch probability.
/// Shares no code with [`super::expectation`] beyond the schedule itself.
pub fn expectation_oracle(s: &Schedule, a: &PauliAssignment) -> Result<f64> {
    s.check_assignment(a)?;
    let k = a.labels().iter().filter(|l| !l.is_identity()).count();
    if k > MAX_ORACLE_MEASUREMENTS {
        return Err(Error::InvalidArgument(format!(
            "{k} measurements exceed the oracle's {MAX_ORACLE_MEASUREMENTS}-measurement branch limit"
        )));
    }
    let n = s.qubit_count();
    let dim = 1 << n;
    let id = ComplexMatrix::identity(dim);

    // (sign, unnormalized branch state)
    let mut branches: Vec<(f64, ComplexMatrix)> = vec![(1.0, s.initial_state().matrix().clone())];
    for slice in 0..s.slice_count() {
        if slice > 0 {
            for step in s.gaps()[slice - 1].steps() {
                let full: Vec<ComplexMatrix> = step
                    .channel
                    .ops()
                    .iter()
                    .map(|k| embed(k, n, &step.targets))
                    .collect::<Result<_>>()?;
                for (_, rho) in branches.iter_mut() {
                    let mut next = ComplexMatrix::zeros(dim);
                    for k in &full {
                        next = &next + &k.conjugate(rho);
                    }
                    *rho = next;
                }
            }
        }
        for e in s.slice_events(slice) {
            let label = a.labels()[e.id - 1];
            if label.is_identity() {
                continue;
            }
            let obs = embed(&pauli_matrix(label), n, &[e.qubit])?;
            let projectors = [(1.0, (&id + &obs).scale_real(0.5)), (-1.0, (&id - &obs).scale_real(0.5))];
            branches = branches
                .iter()
                .flat_map(|(sign, rho)| projectors.iter().map(move |(o, p)| (sign * o, p.conjugate(rho))))
                .collect();
        }
    }
    Ok(branches.iter().map(|(sign, rho)| sign * rho.trace().re).sum())
}
