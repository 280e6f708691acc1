//! The verification suites behind `pdm verify`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::causality::{
    check_convexity, check_local_monotonicity, check_unitary_invariance, f_tr, CheckReport,
    AXIOM_TOL,
};
use crate::channel::{DensityState, KrausChannel};
use crate::operator::{hermitian_eig, ComplexMatrix, PauliString};
use crate::par::{self, Exec};
use crate::random::{
    haar_unitary, random_bloch, random_channel, random_schedule, random_schedule_with_events, trial_rng,
    TrialRng,
};
use crate::schedule::format::ScheduleDoc;
use crate::schedule::{ancilla_expectation, build_pdm, expectation, expectation_oracle, Schedule};
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 20_240_901;
pub const DEFAULT_TRIALS: usize = 200;

pub const GOLDEN_MATRIX_TOL: f64 = 1e-12;
pub const GOLDEN_SPECTRUM_TOL: f64 = 1e-10;
pub const CLOSED_SYSTEM_TOL: f64 = 1e-9;
pub const ORACLE_TOL: f64 = 1e-12;
pub const ANCILLA_TOL: f64 = 1e-10;

const ORACLE_MAX_EVENTS: usize = 4;
const ORACLE_MAX_QUBITS: usize = 3;
const AXIOM_MAX_EVENTS: usize = 3;
const AXIOM_MAX_QUBITS: usize = 2;
const CLOSED_SYSTEM_GRID: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub violations: usize,
    pub worst_case: String,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// `deviations[i]` belongs to case `i`; `describe` renders the worst one.
    fn from_deviations(name: &'static str, tolerance: f64, deviations: &[f64], describe: impl Fn(usize) -> String) -> Self {
        let violations = deviations.iter().filter(|d| !(**d <= tolerance)).count();
        let worst = (0..deviations.len())
            .reduce(|a, b| if deviations[b] > deviations[a] || deviations[b].is_nan() { b } else { a });
        SuiteResult {
            name,
            cases: deviations.len(),
            max_deviation: worst.map_or(0.0, |i| deviations[i]),
            tolerance,
            violations,
            worst_case: worst.map(describe).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteResult> {
        self.suites.iter().filter(|s| !s.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} trials {}", self.seed, self.trials)?;
        for s in &self.suites {
            writeln!(
                f,
                "{:<4} {:<22} cases {:>5}  max deviation {:.3e}  tolerance {:.0e}",
                if s.passed() { "ok" } else { "FAIL" },
                s.name,
                s.cases,
                s.max_deviation,
                s.tolerance
            )?;
        }
        for s in self.failures() {
            writeln!(f, "failing case in {}: {}", s.name, s.worst_case)?;
        }
        Ok(())
    }
}

// Independent suites draw from distinct ChaCha streams of the same seed.
fn suite_rng(seed: u64, trial: usize, stream: u64) -> TrialRng {
    let mut rng = trial_rng(seed, trial);
    rng.set_stream(stream);
    rng
}

/// The closed-qubit PDM: `|0⟩`, two slices, no evolution in between.
pub fn golden_schedule() -> Schedule {
    Schedule::timelike(DensityState::from_bloch([0.0, 0.0, 1.0]).expect("pole"), KrausChannel::identity(1))
        .expect("two-event schedule")
}

pub fn golden_matrix() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    m[(1, 2)] = Complex64::new(0.5, 0.0);
    m[(2, 1)] = Complex64::new(0.5, 0.0);
    m
}

pub const GOLDEN_EIGENVALUES: [f64; 4] = [-0.5, 0.0, 0.5, 1.0];

fn golden_suites() -> Result<Vec<SuiteResult>> {
    let r = build_pdm(&golden_schedule())?;
    let matrix_dev = r.matrix().max_abs_diff(&golden_matrix());
    let eig = hermitian_eig(r.matrix())?;
    let eig_dev = eig.values.iter().zip(GOLDEN_EIGENVALUES).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let ftr_dev = (f_tr(&r) - 1.0).abs();
    Ok(vec![
        SuiteResult::from_deviations("golden_matrix", GOLDEN_MATRIX_TOL, &[matrix_dev], |_| {
            format!("closed qubit |0>, identity gap: entrywise deviation {matrix_dev:e}")
        }),
        SuiteResult::from_deviations("golden_spectrum", GOLDEN_SPECTRUM_TOL, &[eig_dev, ftr_dev], |i| {
            if i == 0 {
                format!("eigenvalues {:?}", eig.values)
            } else {
                format!("f_tr deviation {ftr_dev:e}")
            }
        }),
    ])
}

/// `|f_tr − 1|` over a grid of random pure inputs and random unitary gaps.
fn closed_system_suite(seed: u64) -> Result<SuiteResult> {
    let cases = CLOSED_SYSTEM_GRID * CLOSED_SYSTEM_GRID;
    let draw = |i: usize| {
        let bloch = crate::random::random_unit_bloch(&mut suite_rng(seed, i / CLOSED_SYSTEM_GRID, 1));
        let u = haar_unitary(&mut suite_rng(seed, i % CLOSED_SYSTEM_GRID, 2), 2);
        (bloch, u)
    };
    let devs = par::try_map_range(Exec::default(), cases, |i| {
        let (bloch, u) = draw(i);
        let s = Schedule::timelike(DensityState::from_bloch(bloch)?, KrausChannel::unitary(u)?)?;
        Ok::<_, Error>((f_tr(&build_pdm(&s)?) - 1.0).abs())
    })?;
    Ok(SuiteResult::from_deviations("closed_system", CLOSED_SYSTEM_TOL, &devs, |i| {
        let (bloch, u) = draw(i);
        format!("seed {seed} case {i}: bloch {bloch:?}, unitary {:?}", crate::schedule::format::matrix_to_spec(&u))
    }))
}

fn oracle_schedule(seed: u64, trial: usize) -> Schedule {
    random_schedule(&mut suite_rng(seed, trial, 3), ORACLE_MAX_EVENTS, ORACLE_MAX_QUBITS)
}

fn oracle_suite(seed: u64, trials: usize) -> Result<SuiteResult> {
    let devs = par::try_map_range(Exec::default(), trials, |trial| {
        let s = oracle_schedule(seed, trial);
        let n = s.event_count();
        (0..1usize << (2 * n)).try_fold(0.0f64, |acc, idx| {
            let a = PauliString::from_index(idx, n);
            Ok::<_, Error>(acc.max((expectation(&s, &a)? - expectation_oracle(&s, &a)?).abs()))
        })
    })?;
    Ok(SuiteResult::from_deviations("oracle_equivalence", ORACLE_TOL, &devs, |trial| {
        let doc = ScheduleDoc::from_schedule(&oracle_schedule(seed, trial));
        format!(
            "seed {seed} trial {trial}: schedule {}",
            serde_json::to_string(&doc).unwrap_or_else(|e| format!("<unserializable: {e}>"))
        )
    }))
}

fn ancilla_case(seed: u64, trial: usize) -> Result<Schedule> {
    let mut rng = suite_rng(seed, trial, 4);
    let bloch = random_bloch(&mut rng);
    let rank = rng.random_range(1..=4);
    let ch = random_channel(&mut rng, 1, rank);
    Schedule::timelike(DensityState::from_bloch(bloch)?, ch)
}

fn ancilla_suite(seed: u64, trials: usize) -> Result<SuiteResult> {
    let devs = par::try_map_range(Exec::default(), trials, |trial| {
        let s = ancilla_case(seed, trial)?;
        (0..16).try_fold(0.0f64, |acc, idx| {
            let a = PauliString::from_index(idx, 2);
            Ok::<_, Error>(acc.max((ancilla_expectation(&s, &a)? - expectation(&s, &a)?).abs()))
        })
    })?;
    Ok(SuiteResult::from_deviations("ancilla_equivalence", ANCILLA_TOL, &devs, |trial| {
        match ancilla_case(seed, trial) {
            Ok(s) => format!(
                "seed {seed} trial {trial}: schedule {}",
                serde_json::to_string(&ScheduleDoc::from_schedule(&s)).unwrap_or_default()
            ),
            Err(e) => format!("seed {seed} trial {trial}: {e}"),
        }
    }))
}

/// Runs one randomized axiom check per trial, each on a fresh random PDM.
fn axiom_suite(
    name: &'static str,
    seed: u64,
    trials: usize,
    stream: u64,
    check: impl Fn(&crate::PseudoDensityMatrix, u64) -> Result<CheckReport> + Sync,
) -> Result<SuiteResult> {
    let reports = par::try_map_range(Exec::default(), trials, |trial| {
        let mut rng = suite_rng(seed, trial, stream);
        let s = random_schedule(&mut rng, AXIOM_MAX_EVENTS, AXIOM_MAX_QUBITS);
        let r = build_pdm(&s)?;
        let mut report = check(&r, rng.random())?;
        report.worst_case = format!(
            "seed {seed} trial {trial} ({}), schedule {}",
            report.worst_case,
            serde_json::to_string(&ScheduleDoc::from_schedule(&s)).unwrap_or_default()
        );
        Ok::<_, Error>(report)
    })?;
    let devs: Vec<f64> = reports.iter().map(|r| r.max_deviation).collect();
    let mut out = SuiteResult::from_deviations(name, AXIOM_TOL, &devs, |i| reports[i].worst_case.clone());
    out.violations = reports.iter().map(|r| r.violations).sum();
    Ok(out)
}

fn convexity_suite(seed: u64, trials: usize) -> Result<SuiteResult> {
    let reports = par::try_map_range(Exec::default(), trials, |trial| {
        let mut rng = suite_rng(seed, trial, 7);
        let n_events = rng.random_range(1..=AXIOM_MAX_EVENTS);
        let k = rng.random_range(2..=3);
        let rs = (0..k)
            .map(|_| build_pdm(&random_schedule_with_events(&mut rng, n_events, AXIOM_MAX_QUBITS)))
            .collect::<Result<Vec<_>>>()?;
        let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        // absorb rounding so the weights sum to one
        let head: f64 = weights[..k - 1].iter().sum();
        weights[k - 1] = 1.0 - head;
        let mut report = check_convexity(&rs, &weights)?;
        report.worst_case = format!("seed {seed} trial {trial}: {} events, weights {weights:?}", n_events);
        Ok::<_, Error>(report)
    })?;
    let devs: Vec<f64> = reports.iter().map(|r| r.max_deviation).collect();
    Ok(SuiteResult::from_deviations("convexity", AXIOM_TOL, &devs, |i| reports[i].worst_case.clone()))
}

/// Runs every suite. `trials` sets the case count of each randomized suite.
pub fn run_verify(seed: u64, trials: usize) -> Result<VerifyReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut suites = golden_suites()?;
    suites.push(closed_system_suite(seed)?);
    suites.push(oracle_suite(seed, trials)?);
    suites.push(ancilla_suite(seed, trials)?);
    suites.push(axiom_suite("unitary_invariance", seed, trials, 5, |r, s| check_unitary_invariance(r, 1, s))?);
    suites.push(axiom_suite("local_monotonicity", seed, trials, 6, |r, s| check_local_monotonicity(r, 1, s))?);
    suites.push(convexity_suite(seed, trials)?);
    Ok(VerifyReport { seed, trials, suites })
}

/// Each suite on its own.
pub mod suites {
    use super::*;

    pub fn golden() -> Result<Vec<SuiteResult>> {
        golden_suites()
    }

    pub fn closed_system(seed: u64) -> Result<SuiteResult> {
        closed_system_suite(seed)
    }

    pub fn oracle_equivalence(seed: u64, trials: usize) -> Result<SuiteResult> {
        oracle_suite(seed, trials)
    }

    pub fn ancilla_equivalence(seed: u64, trials: usize) -> Result<SuiteResult> {
        ancilla_suite(seed, trials)
    }

    pub fn unitary_invariance(seed: u64, trials: usize) -> Result<SuiteResult> {
        axiom_suite("unitary_invariance", seed, trials, 5, |r, s| check_unitary_invariance(r, 1, s))
    }

    pub fn local_monotonicity(seed: u64, trials: usize) -> Result<SuiteResult> {
        axiom_suite("local_monotonicity", seed, trials, 6, |r, s| check_local_monotonicity(r, 1, s))
    }

    pub fn convexity(seed: u64, trials: usize) -> Result<SuiteResult> {
        convexity_suite(seed, trials)
    }
}
