//! Seeded random states, unitaries, channels and schedules for the
//! randomized checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{DensityState, KrausChannel};
use crate::operator::ComplexMatrix;
use crate::schedule::{Event, GapChannel, Schedule};

pub type TrialRng = ChaCha8Rng;

/// Deterministic generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_nalgebra(&q)
}

/// CPTP map on `n_qubits` from a random Stinespring isometry with `rank` Kraus operators.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize, rank: usize) -> KrausChannel {
    let d = 1 << n_qubits;
    let rank = rank.max(1);
    // d·rank × d isometry; block k of rows is Kraus operator k
    let v = ginibre(rng, d * rank, d).qr().q();
    let ops = (0..rank)
        .map(|k| {
            let mut m = ComplexMatrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = v[(k * d + i, j)];
                }
            }
            m
        })
        .collect();
    KrausChannel::new(ops).expect("isometry blocks are square")
}

/// Uniform point on the unit sphere.
pub fn random_unit_bloch<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            return v.map(|x| x / n);
        }
    }
}

/// Uniform point in the Bloch ball.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let r = rng.random::<f64>().cbrt();
    random_unit_bloch(rng).map(|x| x * r)
}

/// Random mixed state `G G† / Tr(G G†)` with `G` complex Gaussian.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> DensityState {
    let d = 1 << n_qubits;
    let g = ComplexMatrix::from_nalgebra(&ginibre(rng, d, d));
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityState::new(gg.scale_real(1.0 / tr).symmetrized().expect("G G† is Hermitian"))
        .expect("normalized Wishart matrix is a state")
}

/// Random schedule with `1..=max_events` events over `1..=max_qubits` qubits,
/// random slice structure and event ids, a random mixed initial state and a
/// random CPTP map (Kraus rank 1–3) on the whole register in every gap.
pub fn random_schedule<R: Rng + ?Sized>(rng: &mut R, max_events: usize, max_qubits: usize) -> Schedule {
    let n_events = rng.random_range(1..=max_events.max(1));
    random_schedule_with_events(rng, n_events, max_qubits)
}

/// As [`random_schedule`] with exactly `n_events` events.
pub fn random_schedule_with_events<R: Rng + ?Sized>(rng: &mut R, n_events: usize, max_qubits: usize) -> Schedule {
    let n_events = n_events.max(1);
    let n_qubits = rng.random_range(1..=max_qubits.max(1));

    let mut placements: Vec<(usize, usize)> = Vec::with_capacity(n_events);
    let mut slice = 0;
    let mut used: Vec<usize> = Vec::new();
    for _ in 0..n_events {
        let start_new = !used.is_empty() && (used.len() == n_qubits || rng.random_bool(0.5));
        if start_new {
            slice += 1;
            used.clear();
        }
        let free: Vec<usize> = (0..n_qubits).filter(|q| !used.contains(q)).collect();
        let q = free[rng.random_range(0..free.len())];
        used.push(q);
        placements.push((q, slice));
    }
    let mut ids: Vec<usize> = (1..=n_events).collect();
    ids.shuffle(rng);
    let events = placements
        .iter()
        .zip(ids)
        .map(|(&(qubit, slice), id)| Event { id, qubit, slice })
        .collect();
    let gaps = (0..slice)
        .map(|_| {
            let rank = rng.random_range(1..=3);
            GapChannel::full(random_channel(rng, n_qubits, rank))
        })
        .collect();
    let state = random_density(rng, n_qubits);
    Schedule::new(state, events, gaps).expect("generated schedules are well formed")
}
