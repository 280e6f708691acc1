use super::{expectation, Event, PauliAssignment, Schedule};
use crate::operator::{from_pauli_expectations, partial_trace, pauli_expectations, ComplexMatrix, PauliString};
use crate::par::{self, Exec};
use crate::{Error, Result, HERMITIAN_TOL};

/// `4ⁿ` expectations are evaluated per PDM.
pub const MAX_PDM_EVENTS: usize = 5;

/// Hermitian, unit-trace operator over the tensor product of event spaces.
///
/// Unlike a density matrix it may have negative eigenvalues. Expectations are
/// stored raw (in `[−1, 1]`, indexed by [`PauliString::index`]); the `2⁻ⁿ`
/// normalization only enters the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoDensityMatrix {
    matrix: ComplexMatrix,
    events: Vec<Event>,
    expectations: Vec<f64>,
}

impl PseudoDensityMatrix {
    fn from_parts(matrix: ComplexMatrix, events: Vec<Event>, expectations: Vec<f64>) -> Result<Self> {
        let n = events.len();
        if matrix.dim() != 1 << n || expectations.len() != 1 << (2 * n) {
            return Err(Error::Dimension(format!("PDM over {n} event(s) has inconsistent sizes")));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::Invariant(format!("PDM is not Hermitian (deviation {dev:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::Invariant(format!("PDM trace is {tr}, not 1")));
        }
        if (expectations[0] - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::Invariant(format!(
                "all-identity expectation is {}, not 1",
                expectations[0]
            )));
        }
        if let Some((a, e)) = expectations.iter().enumerate().find(|(_, e)| e.abs() > 1.0 + HERMITIAN_TOL) {
            return Err(Error::Invariant(format!(
                "expectation of {} is {e}, outside [-1, 1]",
                PauliString::from_index(a, n)
            )));
        }
        Ok(Self { matrix, events, expectations })
    }

    /// Wraps a matrix, deriving its Pauli expectations; checks every PDM invariant.
    pub fn from_matrix(matrix: ComplexMatrix, events: Vec<Event>) -> Result<Self> {
        if matrix.dim() != 1 << events.len() {
            return Err(Error::Dimension(format!(
                "matrix dim {} does not match {} event(s)",
                matrix.dim(),
                events.len()
            )));
        }
        let expectations = pauli_expectations(&matrix)?;
        Self::from_parts(matrix, events, expectations)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn expectations(&self) -> &[f64] {
        &self.expectations
    }

    /// Stored expectation for an assignment.
    pub fn stored_expectation(&self, a: &PauliAssignment) -> Result<f64> {
        self.check_len(a)?;
        Ok(self.expectations[a.index()])
    }

    fn check_len(&self, a: &PauliAssignment) -> Result<()> {
        if a.len() != self.events.len() {
            return Err(Error::Dimension(format!(
                "assignment has {} label(s) for {} event(s)",
                a.len(),
                self.events.len()
            )));
        }
        Ok(())
    }
}

/// Assembles `R = 2⁻ⁿ Σ_a ⟨a⟩ ⨂ σ_a` from all `4ⁿ` assignment expectations.
pub fn build_pdm(s: &Schedule) -> Result<PseudoDensityMatrix> {
    build_pdm_with(s, Exec::default())
}

pub fn build_pdm_with(s: &Schedule, exec: Exec) -> Result<PseudoDensityMatrix> {
    let n = s.event_count();
    if n > MAX_PDM_EVENTS {
        return Err(Error::InvalidArgument(format!(
            "{n} events exceed the {MAX_PDM_EVENTS}-event PDM limit"
        )));
    }
    let expectations = par::try_map_range(exec, 1 << (2 * n), |a| expectation(s, &PauliString::from_index(a, n)))?;
    let matrix = from_pauli_expectations(&expectations, n)?;
    PseudoDensityMatrix::from_parts(matrix, s.events().to_vec(), expectations)
}

/// `Tr((⨂σ)·R)`.
pub fn pdm_expectation(r: &PseudoDensityMatrix, a: &PauliAssignment) -> Result<f64> {
    r.check_len(a)?;
    Ok(a.trace_with(&r.matrix)?.re)
}

/// Traces out every event whose id is not in `keep`.
///
/// Kept events are renumbered `1..=k` in their original id order.
pub fn reduce_pdm(r: &PseudoDensityMatrix, keep: &[usize]) -> Result<PseudoDensityMatrix> {
    let n = r.event_count();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("reduced PDM must keep at least one event".into()));
    }
    if let Some(bad) = keep.iter().find(|&&id| id == 0 || id > n) {
        return Err(Error::InvalidArgument(format!("no event with id {bad}")));
    }
    let mut factors: Vec<usize> = keep.iter().map(|id| id - 1).collect();
    factors.sort_unstable();
    factors.dedup();
    let matrix = partial_trace(&r.matrix, &vec![2; n], &factors)?;
    let events = factors
        .iter()
        .enumerate()
        .map(|(k, &f)| Event { id: k + 1, ..r.events[f] })
        .collect();
    PseudoDensityMatrix::from_matrix(matrix, events)
}
