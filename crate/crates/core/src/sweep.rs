//! Waiting-time sweeps of the two-event single-qubit schedule.
//!
//! A qubit is prepared from a Bloch vector, measured, left under a noise model
//! for a time `t`, and measured again. Each grid point yields the PDM spectrum,
//! `f_tr` and its classification.

use serde::{Deserialize, Serialize};

use crate::causality::{classify_matrix, classify_spectrum, Classification};
use crate::channel::{channel_at_time, DensityState, NoiseModel};
use crate::par::{self, Exec};
use crate::schedule::format::{NoiseSpec, StateSpec};
use crate::schedule::{build_pdm_with, Schedule};
use crate::{Error, Result, PSD_TOL};

pub const CSV_HEADER: &str = "t,lambda1,lambda2,lambda3,lambda4,f_tr,classification";

/// Relative time resolution of [`Sweep::find_transition`].
pub const TRANSITION_REL_TOL: f64 = 1e-9;

/// Coarse scan resolution used to bracket a transition before bisecting.
const TRANSITION_SCAN_INTERVALS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    #[default]
    Linear,
    Log,
}

/// Sweep description, read from the same JSON dialect as schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub initial_state: StateSpec,
    pub noise: NoiseSpec,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn prepare(&self) -> Result<Sweep> {
        let state = self.initial_state.to_state()?;
        if state.qubit_count() != 1 {
            return Err(Error::InvalidArgument("sweeps need a single-qubit initial state".into()));
        }
        let model = self.noise.to_model()?;
        if model.qubit_count() != 1 {
            return Err(Error::InvalidArgument("sweep noise must act on one qubit".into()));
        }
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_min < 0.0 || self.t_min >= self.t_max {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 points, got {}", self.points)));
        }
        if self.grid == Grid::Log && self.t_min <= 0.0 {
            return Err(Error::InvalidArgument("a log grid needs t_min > 0".into()));
        }
        Ok(Sweep { state, model, t_min: self.t_min, t_max: self.t_max, points: self.points, grid: self.grid })
    }
}

/// A validated sweep.
#[derive(Debug, Clone)]
pub struct Sweep {
    state: DensityState,
    model: NoiseModel,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub grid: Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    /// Ascending.
    pub eigenvalues: [f64; 4],
    pub f_tr: f64,
    pub classification: Classification,
}

impl Sweep {
    pub fn new(state: DensityState, model: NoiseModel, t_min: f64, t_max: f64, points: usize, grid: Grid) -> Result<Self> {
        let sweep = Sweep { state, model, t_min, t_max, points, grid };
        if sweep.state.qubit_count() != 1 || sweep.model.qubit_count() != 1 {
            return Err(Error::InvalidArgument("sweeps act on a single qubit".into()));
        }
        sweep.model.validate()?;
        if !(t_min >= 0.0 && t_min < t_max && t_max.is_finite()) || points < 2 || (grid == Grid::Log && t_min <= 0.0) {
            return Err(Error::InvalidArgument("invalid sweep range".into()));
        }
        Ok(sweep)
    }

    pub fn times(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    return self.t_max;
                }
                let f = i as f64 / last as f64;
                match self.grid {
                    Grid::Linear => self.t_min + (self.t_max - self.t_min) * f,
                    Grid::Log => self.t_min * (self.t_max / self.t_min).powf(f),
                }
            })
            .collect()
    }

    pub fn schedule_at(&self, t: f64) -> Result<Schedule> {
        Schedule::timelike(self.state.clone(), channel_at_time(&self.model, t)?)
    }

    pub fn row_at(&self, t: f64) -> Result<SweepRow> {
        let pdm = build_pdm_with(&self.schedule_at(t)?, Exec::Sequential)?;
        let report = classify_matrix(pdm.matrix(), PSD_TOL)?;
        let eigenvalues: [f64; 4] = report
            .eigenvalues
            .as_slice()
            .try_into()
            .map_err(|_| Error::Invariant("two-event PDM must have 4 eigenvalues".into()))?;
        Ok(SweepRow { t, eigenvalues, f_tr: report.f_tr, classification: report.classification })
    }

    pub fn run(&self) -> Result<Vec<SweepRow>> {
        self.run_with(Exec::default())
    }

    pub fn run_with(&self, exec: Exec) -> Result<Vec<SweepRow>> {
        let times = self.times();
        par::try_map_range(exec, times.len(), |i| self.row_at(times[i]))
    }

    fn is_causal(&self, t: f64) -> Result<bool> {
        Ok(self.row_at(t)?.classification == Classification::Causal)
    }

    /// First time in `[t_min, t_max]` where the classification flips, located by
    /// bisection on the minimum eigenvalue to `1e-9·(t_max − t_min)`.
    pub fn find_transition(&self) -> Result<Option<Transition>> {
        let span = self.t_max - self.t_min;
        let scan: Vec<f64> = (0..=TRANSITION_SCAN_INTERVALS)
            .map(|i| self.t_min + span * i as f64 / TRANSITION_SCAN_INTERVALS as f64)
            .collect();
        let states = par::try_map_range(Exec::default(), scan.len(), |i| self.is_causal(scan[i]))?;
        let Some(k) = states.windows(2).position(|w| w[0] != w[1]) else {
            return Ok(None);
        };
        let before = states[k];
        let (mut lo, mut hi) = (scan[k], scan[k + 1]);
        let tol = TRANSITION_REL_TOL * span;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.is_causal(mid)? == before {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let label = |c: bool| if c { Classification::Causal } else { Classification::SpacelikeCompatible };
        Ok(Some(Transition { t: 0.5 * (lo + hi), from: label(before), to: label(!before) }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub t: f64,
    pub from: Classification,
    pub to: Classification,
}

/// CSV with [`CSV_HEADER`]; floats in shortest round-trip form.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let [l1, l2, l3, l4] = r.eigenvalues;
        out.push_str(&format!("{},{l1},{l2},{l3},{l4},{},{}\n", r.t, r.f_tr, r.classification));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::Parse(format!("row {}: expected 7 fields, got {}", i + 1, fields.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)));
            Ok(SweepRow {
                t: num(fields[0])?,
                eigenvalues: [num(fields[1])?, num(fields[2])?, num(fields[3])?, num(fields[4])?],
                f_tr: num(fields[5])?,
                classification: fields[6].parse()?,
            })
        })
        .collect()
}

/// Classification implied by a row's eigenvalues alone.
pub fn reclassify(row: &SweepRow) -> Classification {
    classify_spectrum(&row.eigenvalues, PSD_TOL)
}
