use super::KrausChannel;
use crate::operator::ComplexMatrix;
use crate::{Error, Result};

/// Noise acting for a waiting time `t`.
///
/// The single-qubit families decay exponentially: dephasing survival
/// `γ(t) = e^{−t/τ_φ}`, depolarizing shrink `λ(t) = e^{−t/τ_d}` and damping
/// probability `p(t) = 1 − e^{−t/τ₁}`.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    Dephasing { tau: f64 },
    Depolarizing { tau: f64 },
    AmplitudeDamping { tau: f64 },
    /// A fixed unitary applied for any `t > 0`; identity at `t = 0`.
    Unitary(ComplexMatrix),
    /// Members applied left to right.
    Composite(Vec<NoiseModel>),
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::Dephasing { tau } | NoiseModel::Depolarizing { tau } | NoiseModel::AmplitudeDamping { tau } => {
                if !(tau.is_finite() && *tau > 0.0) {
                    return Err(Error::InvalidArgument(format!("time constant {tau} must be positive")));
                }
                Ok(())
            }
            NoiseModel::Unitary(u) => KrausChannel::unitary(u.clone()).map(|_| ()),
            NoiseModel::Composite(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidArgument("composite noise model has no members".into()));
                }
                members.iter().try_for_each(NoiseModel::validate)?;
                let q = members[0].qubit_count();
                if members.iter().any(|m| m.qubit_count() != q) {
                    return Err(Error::Dimension("composite members act on different qubit counts".into()));
                }
                Ok(())
            }
        }
    }

    /// Number of qubits the model acts on.
    pub fn qubit_count(&self) -> usize {
        match self {
            NoiseModel::Unitary(u) => u.qubit_count().unwrap_or(0),
            NoiseModel::Composite(members) => members.first().map_or(1, NoiseModel::qubit_count),
            _ => 1,
        }
    }
}

pub fn channel_at_time(model: &NoiseModel, t: f64) -> Result<KrausChannel> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!("waiting time {t} must be nonnegative")));
    }
    model.validate()?;
    match model {
        NoiseModel::Dephasing { tau } => KrausChannel::dephasing((-t / tau).exp()),
        NoiseModel::Depolarizing { tau } => KrausChannel::depolarizing((-t / tau).exp()),
        NoiseModel::AmplitudeDamping { tau } => KrausChannel::amplitude_damping(-(-t / tau).exp_m1()),
        NoiseModel::Unitary(u) if t == 0.0 => Ok(KrausChannel::identity(u.qubit_count().unwrap_or(0))),
        NoiseModel::Unitary(u) => KrausChannel::unitary(u.clone()),
        NoiseModel::Composite(members) => {
            let mut acc = channel_at_time(&members[0], t)?;
            for m in &members[1..] {
                acc = acc.compose(&channel_at_time(m, t)?)?;
            }
            Ok(acc)
        }
    }
}
