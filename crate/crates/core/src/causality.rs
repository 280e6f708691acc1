//! The trace-norm causality monotone `f_tr(R) = ‖R‖_tr − 1`.
//!
//! A PDM with a negative eigenvalue cannot be the state of spacelike separated
//! systems; since it is Hermitian with unit trace its trace norm then exceeds
//! one. `f_tr` is zero on every positive semi-definite PDM, equals one for two
//! consecutive measurements of a closed qubit, is unitarily invariant, does
//! not increase under local CPTP maps on single events, and is convex. The
//! `check_*` functions test the last three properties on random draws.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::operator::{hermitian_eig, ComplexMatrix};
use crate::par::{self, Exec};
use crate::random::{haar_unitary, random_channel, trial_rng};
use crate::schedule::PseudoDensityMatrix;
use crate::{Error, Result, HERMITIAN_TOL, PSD_TOL};

/// Slack allowed in every randomized axiom check.
pub const AXIOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Positive semi-definite within tolerance: reproducible by spacelike separated systems.
    SpacelikeCompatible,
    /// Has a negative eigenvalue: some event influences another.
    Causal,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::SpacelikeCompatible => "spacelike_compatible",
            Classification::Causal => "causal",
        })
    }
}

impl FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spacelike_compatible" => Ok(Classification::SpacelikeCompatible),
            "causal" => Ok(Classification::Causal),
            other => Err(Error::Parse(format!("unknown classification `{other}`"))),
        }
    }
}

/// `Causal` iff the smallest eigenvalue is below `-tol`.
pub fn classify_spectrum(eigenvalues: &[f64], tol: f64) -> Classification {
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol {
        Classification::Causal
    } else {
        Classification::SpacelikeCompatible
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalityReport {
    pub f_tr: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub classification: Classification,
    pub tolerance: f64,
}

fn check_unit_trace(m: &ComplexMatrix) -> Result<()> {
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > HERMITIAN_TOL {
        return Err(Error::InvalidArgument(format!("trace {tr} is not 1")));
    }
    Ok(())
}

/// `‖M‖_tr − 1` from a spectrum of unit sum, written as twice the negative
/// mass so it vanishes exactly on PSD spectra. Eigenvalues within `tol` of zero
/// count as zero.
fn monotone_from_spectrum(eigenvalues: &[f64], tol: f64) -> f64 {
    -2.0 * eigenvalues.iter().filter(|&&l| l < -tol).sum::<f64>()
}

/// `max(0, ‖M‖_tr − 1)` for a Hermitian unit-trace matrix.
pub fn causality_monotone(m: &ComplexMatrix) -> Result<f64> {
    check_unit_trace(m)?;
    Ok(monotone_from_spectrum(&hermitian_eig(m)?.values, PSD_TOL))
}

pub fn f_tr(r: &PseudoDensityMatrix) -> f64 {
    causality_monotone(r.matrix()).expect("PDM invariants guarantee a Hermitian unit-trace matrix")
}

pub fn classify_matrix(m: &ComplexMatrix, tol: f64) -> Result<CausalityReport> {
    check_unit_trace(m)?;
    let eigenvalues = hermitian_eig(m)?.values;
    let f_tr = monotone_from_spectrum(&eigenvalues, tol);
    Ok(CausalityReport {
        f_tr,
        min_eigenvalue: eigenvalues[0],
        classification: classify_spectrum(&eigenvalues, tol),
        eigenvalues,
        tolerance: tol,
    })
}

pub fn classify(r: &PseudoDensityMatrix, tol: f64) -> CausalityReport {
    classify_matrix(r.matrix(), tol).expect("PDM invariants guarantee a Hermitian unit-trace matrix")
}

/// [`classify`] at the shared positivity tolerance.
pub fn classify_default(r: &PseudoDensityMatrix) -> CausalityReport {
    classify(r, PSD_TOL)
}

/// Result of a randomized axiom check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub trials: usize,
    /// Largest observed value of the checked quantity (see each check).
    pub max_deviation: f64,
    pub violations: usize,
    pub tolerance: f64,
    /// Description of the worst trial, for reproduction.
    pub worst_case: String,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn from_trials(tolerance: f64, results: Vec<(f64, String)>) -> Self {
        let trials = results.len();
        let violations = results.iter().filter(|(d, _)| !(*d <= tolerance)).count();
        let (max_deviation, worst_case) = results
            .into_iter()
            .fold((f64::NEG_INFINITY, String::new()), |acc, r| if r.0 > acc.0 || r.0.is_nan() { r } else { acc });
        Self { trials, max_deviation, violations, tolerance, worst_case }
    }
}

fn require_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    Ok(())
}

/// `|f_tr(U R U†) − f_tr(R)|` for Haar-random `U` on the full PDM space.
pub fn check_unitary_invariance(r: &PseudoDensityMatrix, trials: usize, seed: u64) -> Result<CheckReport> {
    require_trials(trials)?;
    let base = f_tr(r);
    let results = par::try_map_range(Exec::default(), trials, |trial| {
        let u = haar_unitary(&mut trial_rng(seed, trial), r.matrix().dim());
        let rotated = u.conjugate(r.matrix()).symmetrized()?;
        let dev = (causality_monotone(&rotated)? - base).abs();
        Ok::<_, Error>((dev, format!("seed {seed} trial {trial}: |Δf_tr| = {dev:e}")))
    })?;
    Ok(CheckReport::from_trials(AXIOM_TOL, results))
}

/// Applies `channel` to tensor factor `event_index` (0-based) of `m`.
pub fn apply_local_channel(m: &ComplexMatrix, event_index: usize, channel: &KrausChannel) -> Result<ComplexMatrix> {
    let n = m
        .qubit_count()
        .ok_or_else(|| Error::Dimension(format!("dim {} is not a power of two", m.dim())))?;
    channel.apply_on(m, n, &[event_index])
}

/// `f_tr(Λ(R)) − f_tr(R)` for random single-event CPTP maps `Λ` (random
/// Stinespring isometries of Kraus rank 1–4); must not exceed the tolerance.
pub fn check_local_monotonicity(r: &PseudoDensityMatrix, trials: usize, seed: u64) -> Result<CheckReport> {
    require_trials(trials)?;
    let base = f_tr(r);
    let n = r.event_count();
    let results = par::try_map_range(Exec::default(), trials, |trial| {
        use rand::Rng;
        let mut rng = trial_rng(seed, trial);
        let event = rng.random_range(0..n);
        let rank = rng.random_range(1..=4);
        let ch = random_channel(&mut rng, 1, rank);
        let out = apply_local_channel(r.matrix(), event, &ch)?.symmetrized()?;
        let increase = causality_monotone(&out)? - base;
        Ok::<_, Error>((
            increase,
            format!("seed {seed} trial {trial}: rank-{rank} channel on event {}, Δf_tr = {increase:e}", event + 1),
        ))
    })?;
    Ok(CheckReport::from_trials(AXIOM_TOL, results))
}

/// `f_tr(Σ pᵢRᵢ) − Σ pᵢ f_tr(Rᵢ)`; must not exceed the tolerance.
pub fn check_convexity(rs: &[PseudoDensityMatrix], weights: &[f64]) -> Result<CheckReport> {
    if rs.is_empty() || rs.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{} PDM(s) with {} weight(s)",
            rs.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !(w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("weights {weights:?} are not a probability vector")));
    }
    let dim = rs[0].matrix().dim();
    if rs.iter().any(|r| r.matrix().dim() != dim) {
        return Err(Error::Dimension("PDMs in a mixture must share a dimension".into()));
    }
    let mut mix = ComplexMatrix::zeros(dim);
    let mut avg = 0.0;
    for (r, &w) in rs.iter().zip(weights) {
        mix = &mix + &r.matrix().scale_real(w);
        avg += w * f_tr(r);
    }
    let excess = causality_monotone(&mix.symmetrized()?)? - avg;
    Ok(CheckReport::from_trials(
        AXIOM_TOL,
        vec![(excess, format!("mixture of {} PDM(s): f_tr(mix) − Σpf = {excess:e}", rs.len()))],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::DensityState;
    use crate::operator::kron;
    use crate::schedule::{build_pdm, Schedule};

    fn closed_pdm() -> PseudoDensityMatrix {
        let s = Schedule::timelike(DensityState::from_bloch([0.0, 0.0, 1.0]).unwrap(), KrausChannel::identity(1)).unwrap();
        build_pdm(&s).unwrap()
    }

    fn timelike_pdm(r0: [f64; 3], ch: KrausChannel) -> PseudoDensityMatrix {
        build_pdm(&Schedule::timelike(DensityState::from_bloch(r0).unwrap(), ch).unwrap()).unwrap()
    }

    fn swap_factors(r: &PseudoDensityMatrix) -> PseudoDensityMatrix {
        let mut p = ComplexMatrix::zeros(4);
        for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            p[(a, b)] = Complex64::new(1.0, 0.0);
        }
        PseudoDensityMatrix::from_matrix(p.conjugate(r.matrix()), r.events().to_vec()).unwrap()
    }

    #[test]
    fn closed_qubit_has_unit_monotone() {
        let r = closed_pdm();
        assert!((f_tr(&r) - 1.0).abs() < 1e-12);
        let rep = classify(&r, PSD_TOL);
        assert_eq!(rep.classification, Classification::Causal);
        assert!((rep.min_eigenvalue + 0.5).abs() < 1e-12);
    }

    #[test]
    fn states_have_zero_monotone() {
        let rho = DensityState::product_bloch(&[[0.3, 0.0, 0.4], [0.0, 0.0, -1.0]]).unwrap();
        let r = build_pdm(&Schedule::single_slice(rho).unwrap()).unwrap();
        assert!(f_tr(&r) < 1e-12);
        assert_eq!(classify(&r, PSD_TOL).classification, Classification::SpacelikeCompatible);
    }

    #[test]
    fn mixed_depolarized_monotone() {
        let r = timelike_pdm([0.0; 3], KrausChannel::depolarizing(0.5).unwrap());
        assert!((f_tr(&r) - 0.25).abs() < 1e-12);
        let r = timelike_pdm([0.0; 3], KrausChannel::depolarizing(0.2).unwrap());
        assert_eq!(f_tr(&r), 0.0);
    }

    #[test]
    fn weakly_dephased_is_still_causal() {
        let r = timelike_pdm([0.0, 0.0, 1.0], KrausChannel::dephasing(0.01).unwrap());
        let rep = classify(&r, PSD_TOL);
        assert_eq!(rep.classification, Classification::Causal);
        assert!((rep.min_eigenvalue + 0.005).abs() < 1e-12);
    }

    #[test]
    fn classification_strings_round_trip() {
        for c in [Classification::Causal, Classification::SpacelikeCompatible] {
            assert_eq!(c.to_string().parse::<Classification>().unwrap(), c);
        }
        assert!("acausal".parse::<Classification>().is_err());
    }

    #[test]
    fn unit_trace_is_required() {
        assert!(causality_monotone(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn swap_and_identity_leave_monotone_unchanged() {
        let r = closed_pdm();
        let swapped = swap_factors(&r);
        assert!((f_tr(&swapped) - f_tr(&r)).abs() < 1e-12);
        let same = apply_local_channel(r.matrix(), 1, &KrausChannel::identity(1)).unwrap();
        assert_eq!(&same, r.matrix());
    }

    #[test]
    fn full_depolarization_of_second_event() {
        let r = closed_pdm();
        let out = apply_local_channel(r.matrix(), 1, &KrausChannel::depolarizing(0.0).unwrap()).unwrap();
        let want = kron(&[
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
            ComplexMatrix::identity(2).scale_real(0.5),
        ])
        .unwrap();
        assert!(out.max_abs_diff(&want) < 1e-15);
        assert!(causality_monotone(&out).unwrap() < 1e-12);
    }

    #[test]
    fn randomized_checks_pass_on_closed_qubit() {
        let r = closed_pdm();
        assert!(check_unitary_invariance(&r, 100, 1).unwrap().passed());
        let mono = check_local_monotonicity(&r, 200, 2).unwrap();
        assert!(mono.passed(), "{mono:?}");
        assert!(check_unitary_invariance(&r, 0, 1).is_err());
    }

    #[test]
    fn convexity_examples() {
        let r = closed_pdm();
        let single = check_convexity(std::slice::from_ref(&r), &[1.0]).unwrap();
        assert!(single.max_deviation.abs() < 1e-12);
        let mixed = check_convexity(&[r.clone(), swap_factors(&r)], &[0.5, 0.5]).unwrap();
        assert!(mixed.passed());
        assert!(check_convexity(std::slice::from_ref(&r), &[0.5]).is_err());
        assert!(check_convexity(&[r.clone(), r], &[1.5, -0.5]).is_err());
    }

    #[test]
    fn monotone_agrees_with_trace_norm() {
        use crate::operator::trace_norm;
        use crate::random::random_schedule;
        for trial in 0..40 {
            let r = build_pdm(&random_schedule(&mut trial_rng(17, trial), 3, 2)).unwrap();
            let direct = (trace_norm(r.matrix()).unwrap() - 1.0).max(0.0);
            assert!((f_tr(&r) - direct).abs() < 1e-9, "trial {trial}: {} vs {direct}", f_tr(&r));
        }
    }
}
