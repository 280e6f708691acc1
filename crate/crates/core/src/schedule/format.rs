//! JSON documents for schedules and noise descriptors.
//!
//! ```json
//! {
//!   "qubits": 1,
//!   "initial_state": { "bloch": [0, 0, 1] },
//!   "slices": [[{ "id": 1, "qubit": 0 }], [{ "id": 2, "qubit": 0 }]],
//!   "channels": [{ "kind": "dephasing", "tau": 1.0, "t": 0.5 }]
//! }
//! ```
//!
//! Matrices are nested rows of `[re, im]` pairs. A gap entry is a single
//! channel descriptor or a list applied in order. Single-qubit channels act
//! independently on each listed target (default: every qubit).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Event, GapChannel, LocalChannel, Schedule};
use crate::channel::{channel_at_time, DensityState, KrausChannel, NoiseModel};
use crate::operator::ComplexMatrix;
use crate::{Error, Result};

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub qubits: usize,
    pub initial_state: StateSpec,
    pub slices: Vec<Vec<EventSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channels: Vec<GapSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSpec {
    pub id: usize,
    pub qubit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Bloch([f64; 3]),
    /// One Bloch vector per qubit, qubit 0 first.
    ProductBloch(Vec<[f64; 3]>),
    Matrix(MatrixSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapSpec {
    One(ChannelSpec),
    Many(Vec<ChannelSpec>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Identity,
    Dephasing,
    Depolarizing,
    AmplitudeDamping,
    Unitary,
    Kraus,
    Composite,
}

/// Either `{kind, param}`, `{kind, tau, t}`, `{kind: "unitary", matrix}`,
/// `{kind: "kraus", ops}` or `{kind: "composite", members, t}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ops: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<NoiseSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Dephasing,
    Depolarizing,
    AmplitudeDamping,
    Unitary,
    Composite,
}

/// A [`NoiseModel`] descriptor: `{kind, tau}`, `{kind: "unitary", matrix}` or
/// `{kind: "composite", members}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<NoiseSpec>>,
}

pub fn matrix_from_spec(spec: &MatrixSpec) -> Result<ComplexMatrix> {
    ComplexMatrix::from_rows(
        spec.iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect(),
    )
}

pub fn matrix_to_spec(m: &ComplexMatrix) -> MatrixSpec {
    m.rows().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn require<T: Clone>(field: &Option<T>, name: &str, kind: impl std::fmt::Debug) -> Result<T> {
    field
        .clone()
        .ok_or_else(|| Error::Parse(format!("{kind:?} descriptor is missing `{name}`")))
}

impl StateSpec {
    pub fn to_state(&self) -> Result<DensityState> {
        match self {
            StateSpec::Bloch(r) => DensityState::from_bloch(*r),
            StateSpec::ProductBloch(rs) => {
                if rs.is_empty() {
                    return Err(Error::Parse("product_bloch needs at least one vector".into()));
                }
                DensityState::product_bloch(rs)
            }
            StateSpec::Matrix(m) => DensityState::new(matrix_from_spec(m)?),
        }
    }
}

impl NoiseSpec {
    pub fn to_model(&self) -> Result<NoiseModel> {
        let model = match self.kind {
            NoiseKind::Dephasing => NoiseModel::Dephasing { tau: require(&self.tau, "tau", self.kind)? },
            NoiseKind::Depolarizing => NoiseModel::Depolarizing { tau: require(&self.tau, "tau", self.kind)? },
            NoiseKind::AmplitudeDamping => NoiseModel::AmplitudeDamping { tau: require(&self.tau, "tau", self.kind)? },
            NoiseKind::Unitary => NoiseModel::Unitary(matrix_from_spec(&require(&self.matrix, "matrix", self.kind)?)?),
            NoiseKind::Composite => NoiseModel::Composite(
                require(&self.members, "members", self.kind)?
                    .iter()
                    .map(NoiseSpec::to_model)
                    .collect::<Result<_>>()?,
            ),
        };
        model.validate()?;
        Ok(model)
    }
}

impl ChannelSpec {
    fn time_or_param(&self, direct: fn(f64) -> Result<KrausChannel>, model: fn(f64) -> NoiseModel) -> Result<KrausChannel> {
        match (self.param, self.tau, self.t) {
            (Some(p), None, None) => direct(p),
            (None, Some(tau), Some(t)) => channel_at_time(&model(tau), t),
            _ => Err(Error::Parse(format!(
                "{:?} descriptor needs either `param` or both `tau` and `t`",
                self.kind
            ))),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        match self.kind {
            ChannelKind::Identity => Ok(KrausChannel::identity(1)),
            ChannelKind::Dephasing => self.time_or_param(KrausChannel::dephasing, |tau| NoiseModel::Dephasing { tau }),
            ChannelKind::Depolarizing => {
                self.time_or_param(KrausChannel::depolarizing, |tau| NoiseModel::Depolarizing { tau })
            }
            ChannelKind::AmplitudeDamping => {
                self.time_or_param(KrausChannel::amplitude_damping, |tau| NoiseModel::AmplitudeDamping { tau })
            }
            ChannelKind::Unitary => KrausChannel::unitary(matrix_from_spec(&require(&self.matrix, "matrix", self.kind)?)?),
            ChannelKind::Kraus => KrausChannel::new(
                require(&self.ops, "ops", self.kind)?
                    .iter()
                    .map(matrix_from_spec)
                    .collect::<Result<_>>()?,
            ),
            ChannelKind::Composite => {
                let members = require(&self.members, "members", self.kind)?;
                let model = NoiseModel::Composite(members.iter().map(NoiseSpec::to_model).collect::<Result<_>>()?);
                channel_at_time(&model, require(&self.t, "t", self.kind)?)
            }
        }
    }

    fn to_steps(&self, n_qubits: usize) -> Result<Vec<LocalChannel>> {
        if self.kind == ChannelKind::Identity {
            return Ok(Vec::new());
        }
        let channel = self.to_channel()?;
        let targets = self.targets.clone().unwrap_or_else(|| (0..n_qubits).collect());
        if channel.acts_on() == 1 && targets.len() > 1 {
            Ok(GapChannel::on_each(&channel, &targets).steps)
        } else {
            Ok(vec![LocalChannel { channel, targets }])
        }
    }

    fn from_local(step: &LocalChannel) -> Self {
        ChannelSpec {
            kind: ChannelKind::Kraus,
            param: None,
            tau: None,
            t: None,
            matrix: None,
            ops: Some(step.channel.ops().iter().map(matrix_to_spec).collect()),
            members: None,
            targets: Some(step.targets.clone()),
        }
    }
}

impl GapSpec {
    fn to_gap(&self, n_qubits: usize) -> Result<GapChannel> {
        let specs: &[ChannelSpec] = match self {
            GapSpec::One(c) => std::slice::from_ref(c),
            GapSpec::Many(cs) => cs,
        };
        let mut steps = Vec::new();
        for s in specs {
            steps.extend(s.to_steps(n_qubits)?);
        }
        Ok(GapChannel::new(steps))
    }
}

impl ScheduleDoc {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule documents always serialize")
    }

    pub fn to_schedule(&self) -> Result<Schedule> {
        let state = self.initial_state.to_state()?;
        if state.qubit_count() != self.qubits {
            return Err(Error::Parse(format!(
                "`qubits` is {} but the initial state has {} qubit(s)",
                self.qubits,
                state.qubit_count()
            )));
        }
        let events = self
            .slices
            .iter()
            .enumerate()
            .flat_map(|(slice, evs)| evs.iter().map(move |e| Event { id: e.id, qubit: e.qubit, slice }))
            .collect();
        let gaps = self.channels.iter().map(|g| g.to_gap(self.qubits)).collect::<Result<_>>()?;
        Schedule::new(state, events, gaps)
    }

    /// Emits any schedule; channels become explicit Kraus lists.
    pub fn from_schedule(s: &Schedule) -> Self {
        let slices = (0..s.slice_count())
            .map(|k| s.slice_events(k).map(|e| EventSpec { id: e.id, qubit: e.qubit }).collect())
            .collect();
        let channels = if s.gaps().iter().all(GapChannel::is_identity) {
            Vec::new()
        } else {
            s.gaps()
                .iter()
                .map(|g| GapSpec::Many(g.steps().iter().map(ChannelSpec::from_local).collect()))
                .collect()
        };
        ScheduleDoc {
            qubits: s.qubit_count(),
            initial_state: StateSpec::Matrix(matrix_to_spec(s.initial_state().matrix())),
            slices,
            channels,
        }
    }
}

/// Parses a schedule document straight into a validated [`Schedule`].
pub fn parse_schedule(text: &str) -> Result<Schedule> {
    ScheduleDoc::parse(text)?.to_schedule()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::build_pdm;

    const CLOSED: &str = r#"{
        "qubits": 1,
        "initial_state": {"bloch": [0, 0, 1]},
        "slices": [[{"id": 1, "qubit": 0}], [{"id": 2, "qubit": 0}]]
    }"#;

    #[test]
    fn parses_closed_qubit_schedule() {
        let s = parse_schedule(CLOSED).unwrap();
        assert_eq!(s.event_count(), 2);
        assert_eq!(s.slice_count(), 2);
        assert!(s.gaps()[0].is_identity());
    }

    #[test]
    fn timed_and_direct_channels_agree() {
        let timed = r#"{"kind": "dephasing", "tau": 1.0, "t": 0.6931471805599453}"#;
        let direct = r#"{"kind": "dephasing", "param": 0.5}"#;
        let a: ChannelSpec = serde_json::from_str(timed).unwrap();
        let b: ChannelSpec = serde_json::from_str(direct).unwrap();
        let diff = a.to_channel().unwrap().choi_matrix().max_abs_diff(&b.to_channel().unwrap().choi_matrix());
        assert!(diff < 1e-15);
    }

    #[test]
    fn incomplete_descriptors_are_parse_errors() {
        for bad in [
            r#"{"kind": "dephasing"}"#,
            r#"{"kind": "dephasing", "param": 0.5, "tau": 1}"#,
            r#"{"kind": "kraus"}"#,
            r#"{"kind": "composite", "members": [{"kind": "dephasing", "tau": 1}]}"#,
        ] {
            let spec: ChannelSpec = serde_json::from_str(bad).unwrap();
            assert!(matches!(spec.to_channel(), Err(Error::Parse(_))), "{bad}");
        }
        assert!(serde_json::from_str::<ChannelSpec>(r#"{"kind": "teleport"}"#).is_err());
        assert!(ScheduleDoc::parse(r#"{"qubits": 1}"#).is_err());
    }

    #[test]
    fn qubit_count_must_match_state() {
        let text = CLOSED.replace("\"qubits\": 1", "\"qubits\": 2");
        assert!(matches!(parse_schedule(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn single_qubit_channel_fans_out_over_targets() {
        let text = r#"{
            "qubits": 2,
            "initial_state": {"product_bloch": [[0, 0, 1], [1, 0, 0]]},
            "slices": [[{"id": 1, "qubit": 0}, {"id": 2, "qubit": 1}], [{"id": 3, "qubit": 1}]],
            "channels": [{"kind": "depolarizing", "param": 0.5}]
        }"#;
        let s = parse_schedule(text).unwrap();
        assert_eq!(s.gaps()[0].steps().len(), 2);
        let targeted = text.replace(r#""param": 0.5}"#, r#""param": 0.5, "targets": [1]}"#);
        assert_eq!(parse_schedule(&targeted).unwrap().gaps()[0].steps().len(), 1);
    }

    #[test]
    fn emitted_schedule_reparses_to_the_same_pdm() {
        let text = r#"{
            "qubits": 2,
            "initial_state": {"product_bloch": [[0.1, 0.2, 0.3], [0.3, 0, -0.4]]},
            "slices": [[{"id": 2, "qubit": 1}], [{"id": 1, "qubit": 0}, {"id": 3, "qubit": 1}]],
            "channels": [[{"kind": "amplitude_damping", "tau": 7.8, "t": 3.0, "targets": [0]},
                          {"kind": "composite", "t": 0.25, "members": [
                              {"kind": "dephasing", "tau": 3.2}, {"kind": "depolarizing", "tau": 1.5}]}]]
        }"#;
        let s = parse_schedule(text).unwrap();
        let emitted = ScheduleDoc::from_schedule(&s).to_json();
        let s2 = parse_schedule(&emitted).unwrap();
        assert_eq!(s, s2);
        assert_eq!(build_pdm(&s).unwrap(), build_pdm(&s2).unwrap());
    }
}
