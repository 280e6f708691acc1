//! Measurement-event schedules and pseudo-density matrix assembly.
//!
//! A schedule is an initial state, a list of single-qubit Pauli measurement
//! events grouped into time slices, and a channel acting in each gap between
//! consecutive slices. Events within a slice touch distinct qubits and are
//! spacelike; events in different slices may act on the same qubit and are
//! then timelike separated.

mod ancilla;
mod engine;
pub mod format;
mod oracle;
mod pdm;

use crate::channel::{DensityState, KrausChannel};
use crate::operator::{ComplexMatrix, PauliString};
use crate::{Error, Result, PSD_TOL};

pub use ancilla::{ancilla_expectation, basis_change};
pub use engine::expectation;
pub use oracle::{expectation_oracle, MAX_ORACLE_MEASUREMENTS};
pub use pdm::{build_pdm, build_pdm_with, pdm_expectation, reduce_pdm, PseudoDensityMatrix, MAX_PDM_EVENTS};

/// Per-event Pauli choice, indexed by event id − 1.
pub type PauliAssignment = PauliString;

/// Largest register a schedule may act on.
pub const MAX_QUBITS: usize = 8;

/// A measurement opportunity on one qubit in one time slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    /// 1-based; fixes the event's tensor factor in the PDM.
    pub id: usize,
    pub qubit: usize,
    pub slice: usize,
}

/// A channel applied to a subset of the register.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalChannel {
    pub channel: KrausChannel,
    pub targets: Vec<usize>,
}

/// The evolution between two consecutive slices: local channels applied in order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GapChannel {
    steps: Vec<LocalChannel>,
}

impl GapChannel {
    pub fn identity() -> Self {
        Self::default()
    }

    /// A channel on the whole register.
    pub fn full(channel: KrausChannel) -> Self {
        let targets = (0..channel.acts_on()).collect();
        Self { steps: vec![LocalChannel { channel, targets }] }
    }

    pub fn new(steps: Vec<LocalChannel>) -> Self {
        Self { steps }
    }

    /// The same single-qubit channel applied independently to each of `targets`.
    pub fn on_each(channel: &KrausChannel, targets: &[usize]) -> Self {
        Self {
            steps: targets
                .iter()
                .map(|&q| LocalChannel { channel: channel.clone(), targets: vec![q] })
                .collect(),
        }
    }

    pub fn steps(&self) -> &[LocalChannel] {
        &self.steps
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn apply(&self, m: &ComplexMatrix, n_qubits: usize) -> Result<ComplexMatrix> {
        let mut out = m.clone();
        for step in &self.steps {
            out = step.channel.apply_on(&out, n_qubits, &step.targets)?;
        }
        Ok(out)
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        for step in &self.steps {
            crate::operator::check_targets(&step.targets, n_qubits)?;
            if step.targets.len() != step.channel.acts_on() {
                return Err(Error::Dimension(format!(
                    "channel on {} qubit(s) given {} target(s)",
                    step.channel.acts_on(),
                    step.targets.len()
                )));
            }
            let residual = step.channel.tp_residual();
            if residual > PSD_TOL {
                return Err(Error::Invariant(format!(
                    "gap channel is not trace preserving (residual {residual:e})"
                )));
            }
        }
        Ok(())
    }
}

/// Initial state, measurement events and inter-slice evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    initial_state: DensityState,
    /// Sorted by id.
    events: Vec<Event>,
    gaps: Vec<GapChannel>,
    /// Event indices per slice, in qubit order.
    slices: Vec<Vec<usize>>,
}

impl Schedule {
    /// Validates and builds a schedule. An empty `gaps` list means identity
    /// evolution in every gap; otherwise it needs one entry per gap.
    pub fn new(initial_state: DensityState, mut events: Vec<Event>, gaps: Vec<GapChannel>) -> Result<Self> {
        let n_qubits = initial_state.qubit_count();
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "schedules support 1..={MAX_QUBITS} qubits, got {n_qubits}"
            )));
        }
        if events.is_empty() {
            return Err(Error::InvalidArgument("schedule has no events".into()));
        }
        events.sort_by_key(|e| e.id);
        for (k, e) in events.iter().enumerate() {
            if e.id != k + 1 {
                return Err(Error::InvalidArgument(format!(
                    "event ids must be exactly 1..={}, found id {}",
                    events.len(),
                    e.id
                )));
            }
            if e.qubit >= n_qubits {
                return Err(Error::InvalidArgument(format!(
                    "event {} on qubit {} but the state has {n_qubits} qubit(s)",
                    e.id, e.qubit
                )));
            }
        }
        let slice_count = events.iter().map(|e| e.slice).max().unwrap_or(0) + 1;
        let mut slices = vec![Vec::new(); slice_count];
        for (k, e) in events.iter().enumerate() {
            slices[e.slice].push(k);
        }
        for (s, members) in slices.iter_mut().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidArgument(format!("time slice {s} has no events")));
            }
            members.sort_by_key(|&k| events[k].qubit);
            if let Some(w) = members.windows(2).find(|w| events[w[0]].qubit == events[w[1]].qubit) {
                return Err(Error::InvalidArgument(format!(
                    "events {} and {} share qubit {} in slice {s}",
                    events[w[0]].id,
                    events[w[1]].id,
                    events[w[0]].qubit
                )));
            }
        }
        let gaps = if gaps.is_empty() { vec![GapChannel::identity(); slice_count - 1] } else { gaps };
        if gaps.len() != slice_count - 1 {
            return Err(Error::InvalidArgument(format!(
                "{slice_count} slice(s) need {} gap channel(s), got {}",
                slice_count - 1,
                gaps.len()
            )));
        }
        for g in &gaps {
            g.validate(n_qubits)?;
        }
        Ok(Self { initial_state, events, gaps, slices })
    }

    /// Whole-register channels, one per gap.
    pub fn with_channels(initial_state: DensityState, events: Vec<Event>, channels: Vec<KrausChannel>) -> Result<Self> {
        let n = initial_state.qubit_count();
        if let Some(bad) = channels.iter().find(|c| c.acts_on() != n) {
            return Err(Error::Dimension(format!(
                "gap channel acts on {} qubit(s), system has {n}",
                bad.acts_on()
            )));
        }
        Self::new(initial_state, events, channels.into_iter().map(GapChannel::full).collect())
    }

    /// One qubit measured twice with `channel` acting in between.
    pub fn timelike(initial_state: DensityState, channel: KrausChannel) -> Result<Self> {
        let events = vec![
            Event { id: 1, qubit: 0, slice: 0 },
            Event { id: 2, qubit: 0, slice: 1 },
        ];
        Self::with_channels(initial_state, events, vec![channel])
    }

    /// Every qubit measured once in a single slice; event `k + 1` is qubit `k`.
    pub fn single_slice(initial_state: DensityState) -> Result<Self> {
        let events = (0..initial_state.qubit_count())
            .map(|q| Event { id: q + 1, qubit: q, slice: 0 })
            .collect();
        Self::new(initial_state, events, Vec::new())
    }

    pub fn qubit_count(&self) -> usize {
        self.initial_state.qubit_count()
    }

    pub fn initial_state(&self) -> &DensityState {
        &self.initial_state
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn gaps(&self) -> &[GapChannel] {
        &self.gaps
    }

    pub fn slice_count(&self) -> usize {
        self.slices.len()
    }

    /// Events of slice `s` in application (qubit) order.
    pub fn slice_events(&self, s: usize) -> impl Iterator<Item = &Event> {
        self.slices[s].iter().map(|&k| &self.events[k])
    }

    pub(crate) fn check_assignment(&self, a: &PauliAssignment) -> Result<()> {
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
