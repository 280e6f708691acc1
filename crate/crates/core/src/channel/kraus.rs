use num_complex::Complex64;

use super::DensityState;
use crate::operator::{conjugate_local, hermitian_eig, kron2, pauli_matrix, ComplexMatrix, PauliLabel};
use crate::{Error, Result, PSD_TOL};

/// A quantum channel `ρ ↦ Σₖ Kₖ ρ Kₖ†` in Kraus form.
///
/// Construction only checks shapes; use [`KrausChannel::validate`] to check
/// trace preservation and complete positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
    acts_on: usize,
}

/// One-parameter single-qubit noise families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardChannel {
    /// Off-diagonal survival factor `γ ∈ [0, 1]`.
    Dephasing(f64),
    /// Bloch-vector shrink factor `λ ∈ [0, 1]`.
    Depolarizing(f64),
    /// Decay probability `p ∈ [0, 1]` toward `|0⟩`.
    AmplitudeDamping(f64),
}

/// Outcome of [`KrausChannel::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelReport {
    /// `max |Σ K†K − I|`.
    pub tp_residual: f64,
    pub choi_min_eigenvalue: f64,
    pub valid: bool,
}

fn unit_param(name: &str, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidArgument(format!("{name} parameter {v} not in [0, 1]")));
    }
    Ok(v)
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("channel needs at least one Kraus operator".into()))?;
        let dim = first.dim();
        let acts_on = first
            .qubit_count()
            .ok_or_else(|| Error::Dimension(format!("Kraus dim {dim} is not a power of two")))?;
        if let Some(bad) = ops.iter().find(|k| k.dim() != dim) {
            return Err(Error::Dimension(format!(
                "Kraus operators of mixed dims {dim} and {}",
                bad.dim()
            )));
        }
        Ok(Self { ops, acts_on })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { ops: vec![ComplexMatrix::identity(1 << n_qubits)], acts_on: n_qubits }
    }

    /// Conjugation by `u`; fails unless `u` is unitary within `PSD_TOL`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let dev = (&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(u.dim()));
        if dev > PSD_TOL {
            return Err(Error::InvalidArgument(format!("matrix is not unitary (|U†U − I| = {dev:e})")));
        }
        Self::new(vec![u])
    }

    /// Dephasing about the `z` axis: `{√((1+γ)/2)·I, √((1−γ)/2)·Z}`.
    pub fn dephasing(gamma: f64) -> Result<Self> {
        Self::dephasing_about(PauliLabel::Z, gamma)
    }

    /// Keeps the `axis` Bloch component and scales the other two by `gamma`.
    pub fn dephasing_about(axis: PauliLabel, gamma: f64) -> Result<Self> {
        let gamma = unit_param("dephasing", gamma)?;
        if axis.is_identity() {
            return Err(Error::InvalidArgument("dephasing axis must be X, Y or Z".into()));
        }
        Self::new(vec![
            ComplexMatrix::identity(2).scale_real(((1.0 + gamma) / 2.0).sqrt()),
            pauli_matrix(axis).scale_real(((1.0 - gamma) / 2.0).sqrt()),
        ])
    }

    /// Shrinks the Bloch vector by `lambda`.
    pub fn depolarizing(lambda: f64) -> Result<Self> {
        let lambda = unit_param("depolarizing", lambda)?;
        let w = ((1.0 - lambda) / 4.0).sqrt();
        Self::new(vec![
            ComplexMatrix::identity(2).scale_real(((1.0 + 3.0 * lambda) / 4.0).sqrt()),
            pauli_matrix(PauliLabel::X).scale_real(w),
            pauli_matrix(PauliLabel::Y).scale_real(w),
            pauli_matrix(PauliLabel::Z).scale_real(w),
        ])
    }

    pub fn amplitude_damping(p: f64) -> Result<Self> {
        let p = unit_param("amplitude damping", p)?;
        let c = |x: f64| Complex64::new(x, 0.0);
        Self::new(vec![
            ComplexMatrix::from_rows(vec![vec![c(1.0), c(0.0)], vec![c(0.0), c((1.0 - p).sqrt())]])?,
            ComplexMatrix::from_rows(vec![vec![c(0.0), c(p.sqrt())], vec![c(0.0), c(0.0)]])?,
        ])
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn acts_on(&self) -> usize {
        self.acts_on
    }

    pub fn dim(&self) -> usize {
        1 << self.acts_on
    }

    /// `self` first, then `then`; Kraus sets multiplied pairwise.
    pub fn compose(&self, then: &Self) -> Result<Self> {
        if self.acts_on != then.acts_on {
            return Err(Error::Dimension(format!(
                "cannot compose channels on {} and {} qubits",
                self.acts_on, then.acts_on
            )));
        }
        let ops = then
            .ops
            .iter()
            .flat_map(|b| self.ops.iter().map(move |a| b * a))
            .collect();
        Self::new(ops)
    }

    /// `self ⊗ other`, `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let ops = self
            .ops
            .iter()
            .flat_map(|a| other.ops.iter().map(move |b| kron2(a, b)))
            .collect();
        Self { ops, acts_on: self.acts_on + other.acts_on }
    }

    /// Applies the channel to an operator on the channel's own space.
    pub fn apply(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let targets: Vec<usize> = (0..self.acts_on).collect();
        self.apply_on(m, self.acts_on, &targets)
    }

    /// Applies the channel to the `targets` qubits of an operator on `n_qubits`.
    ///
    /// Linear in `m`, so `m` need not be a state.
    pub fn apply_on(&self, m: &ComplexMatrix, n_qubits: usize, targets: &[usize]) -> Result<ComplexMatrix> {
        if targets.len() != self.acts_on {
            return Err(Error::Dimension(format!(
                "channel acts on {} qubit(s) but {} target(s) given",
                self.acts_on,
                targets.len()
            )));
        }
        let mut acc: Option<ComplexMatrix> = None;
        for k in &self.ops {
            let term = conjugate_local(k, n_qubits, targets, m)?;
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        Ok(acc.expect("nonempty Kraus set"))
    }

    /// Unnormalized Choi matrix `Σᵢⱼ |i⟩⟨j| ⊗ E(|i⟩⟨j|)`.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut choi = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut eij = ComplexMatrix::zeros(d);
                eij[(i, j)] = Complex64::new(1.0, 0.0);
                let image = self.apply(&eij).expect("own dimension");
                for r in 0..d {
                    for c in 0..d {
                        choi[(i * d + r, j * d + c)] = image[(r, c)];
                    }
                }
            }
        }
        choi
    }

    pub fn tp_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim());
        for k in &self.ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    pub fn validate(&self) -> ChannelReport {
        let tp_residual = self.tp_residual();
        let choi_min_eigenvalue = hermitian_eig(&self.choi_matrix())
            .map(|e| e.values[0])
            .unwrap_or(f64::NEG_INFINITY);
        ChannelReport {
            tp_residual,
            choi_min_eigenvalue,
            valid: tp_residual <= PSD_TOL && choi_min_eigenvalue >= -PSD_TOL,
        }
    }
}

pub fn make_channel(kind: StandardChannel) -> Result<KrausChannel> {
    match kind {
        StandardChannel::Dephasing(g) => KrausChannel::dephasing(g),
        StandardChannel::Depolarizing(l) => KrausChannel::depolarizing(l),
        StandardChannel::AmplitudeDamping(p) => KrausChannel::amplitude_damping(p),
    }
}

/// Applies `ch` to the `targets` qubits of `rho`.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityState, targets: &[usize]) -> Result<DensityState> {
    let out = ch.apply_on(rho.matrix(), rho.qubit_count(), targets)?;
    Ok(DensityState::new_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bloch_after(ch: &KrausChannel, r: [f64; 3]) -> [f64; 3] {
        let rho = DensityState::from_bloch(r).unwrap();
        apply_channel(ch, &rho, &[0]).unwrap().bloch().unwrap()
    }

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn standard_channels_are_valid() {
        for p in [0.0, 0.13, 0.5, 0.99, 1.0] {
            for ch in [
                KrausChannel::dephasing(p).unwrap(),
                KrausChannel::depolarizing(p).unwrap(),
                KrausChannel::amplitude_damping(p).unwrap(),
                KrausChannel::dephasing_about(PauliLabel::X, p).unwrap(),
            ] {
                let rep = ch.validate();
                assert!(rep.valid, "{rep:?}");
            }
        }
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        assert!(make_channel(StandardChannel::Dephasing(1.5)).is_err());
        assert!(make_channel(StandardChannel::Depolarizing(-0.1)).is_err());
        assert!(make_channel(StandardChannel::AmplitudeDamping(f64::NAN)).is_err());
    }

    #[test]
    fn dephasing_limits_and_off_diagonals() {
        let r = [0.3, -0.2, 0.6];
        assert!(close3(bloch_after(&KrausChannel::dephasing(1.0).unwrap(), r), r, 1e-15));
        let g = 0.37;
        let out = bloch_after(&KrausChannel::dephasing(g).unwrap(), [1.0, 0.0, 0.0]);
        assert!(close3(out, [g, 0.0, 0.0], 1e-15));
        let out = bloch_after(&KrausChannel::dephasing(0.0).unwrap(), [1.0, 0.0, 0.0]);
        assert!(close3(out, [0.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn depolarizing_examples() {
        let out = bloch_after(&KrausChannel::depolarizing(0.0).unwrap(), [0.3, 0.4, 0.5]);
        assert!(close3(out, [0.0; 3], 1e-15));
        let ket0 = DensityState::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let out = apply_channel(&KrausChannel::depolarizing(0.5).unwrap(), &ket0, &[0]).unwrap();
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.75, 0.25])) < 1e-15);
    }

    #[test]
    fn amplitude_damping_decays_to_ground() {
        let out = bloch_after(&KrausChannel::amplitude_damping(1.0).unwrap(), [0.0, 0.0, -1.0]);
        assert!(close3(out, [0.0, 0.0, 1.0], 1e-15));
        let p: f64 = 0.36;
        let out = bloch_after(&KrausChannel::amplitude_damping(p).unwrap(), [1.0, 0.0, 0.0]);
        assert!(close3(out, [(1.0 - p).sqrt(), 0.0, p], 1e-15));
    }

    #[test]
    fn identity_channel_changes_nothing() {
        let rho = DensityState::from_bloch([0.1, 0.2, -0.3]).unwrap();
        let out = apply_channel(&KrausChannel::identity(1), &rho, &[0]).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn validation_reports() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ok = KrausChannel::new(vec![
            ComplexMatrix::identity(2).scale_real(s),
            pauli_matrix(PauliLabel::X).scale_real(s),
        ])
        .unwrap();
        assert!(ok.validate().valid);

        let bad = KrausChannel::new(vec![ComplexMatrix::identity(2), pauli_matrix(PauliLabel::X)]).unwrap();
        let rep = bad.validate();
        assert!(!rep.valid);
        assert!((rep.tp_residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_choi_is_rank_one() {
        let choi = KrausChannel::identity(1).choi_matrix();
        let e = hermitian_eig(&choi).unwrap();
        let want = [0.0, 0.0, 0.0, 2.0];
        assert!(e.values.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-14), "{:?}", e.values);
    }

    #[test]
    fn shape_errors() {
        assert!(KrausChannel::new(vec![]).is_err());
        assert!(KrausChannel::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(4)]).is_err());
        let rho = DensityState::maximally_mixed(2);
        assert!(apply_channel(&KrausChannel::identity(1), &rho, &[0, 1]).is_err());
        assert!(apply_channel(&KrausChannel::identity(1), &rho, &[2]).is_err());
        assert!(KrausChannel::unitary(ComplexMatrix::identity(2).scale_real(2.0)).is_err());
    }

    #[test]
    fn composition_multiplies_kraus_sets() {
        let a = KrausChannel::dephasing(0.4).unwrap();
        let b = KrausChannel::amplitude_damping(0.3).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.ops().len(), 4);
        let rho = DensityState::from_bloch([0.5, -0.5, 0.5]).unwrap();
        let seq = b.apply(&a.apply(rho.matrix()).unwrap()).unwrap();
        assert!(ab.apply(rho.matrix()).unwrap().max_abs_diff(&seq) < 1e-15);
    }

    #[test]
    fn three_axis_dephasing_scales_bloch_uniformly() {
        // X-, Y-, Z-axis dephasing in turn: each component survives one axis and is
        // scaled by g on the other two, so every component ends up scaled by g².
        for g in [0.3, 0.7, 1.0] {
            let composite = KrausChannel::dephasing_about(PauliLabel::X, g)
                .unwrap()
                .compose(&KrausChannel::dephasing_about(PauliLabel::Y, g).unwrap())
                .unwrap()
                .compose(&KrausChannel::dephasing_about(PauliLabel::Z, g).unwrap())
                .unwrap();
            for (axis, r) in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].into_iter().enumerate() {
                let out = bloch_after(&composite, r);
                assert!((out[axis] - g * g).abs() < 1e-14, "g={g} axis={axis} {out:?}");
            }
            let depol = KrausChannel::depolarizing(g * g).unwrap();
            assert!(composite.choi_matrix().max_abs_diff(&depol.choi_matrix()) < 1e-10);
        }
    }
}
