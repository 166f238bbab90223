//! Circle-map recurrences.
//!
//! After cancellation the stroboscopic dynamics is the rigid rotation
//! `theta_k = theta_{k-1} + nu1 (mod 2π)`. A near revival at step `k` is a
//! return of `theta_k` to the arc `I_eps` of length `eps` centred on
//! `theta_0`. Return times to an arc take at most three distinct values, the
//! largest being the sum of the other two, and their mean is `2π / eps` steps.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::contfrac;
use crate::error::{Error, Result};
use crate::phase::{mul_mod_tau, wrap};

/// `theta_k = theta0 + k nu1 mod 2π` for `k = 0..=steps`, each computed
/// directly from `k`.
pub fn rotation_orbit(theta0: f64, nu1: f64, steps: u64) -> Vec<f64> {
    let theta0 = wrap(theta0);
    (0..=steps).map(|k| wrap(theta0 + mul_mod_tau(k as f64, nu1))).collect()
}

/// Angular offset `theta_k - theta_0` folded into `[0, π]`.
#[inline]
fn offset(nu1: f64, k: u64) -> f64 {
    let d = mul_mod_tau(k as f64, nu1);
    d.min(TAU - d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceRecord {
    /// Arc length of `I_eps`; visits are points within `eps / 2` of `theta0`.
    pub epsilon: f64,
    pub nu1: f64,
    pub theta0: f64,
    /// Steps `1 <= k <= horizon` with `theta_k` in `I_eps`, ascending.
    pub indices: Vec<u64>,
    pub horizon: u64,
}

impl RecurrenceRecord {
    /// Differences between successive recurrence steps.
    pub fn gaps(&self) -> Vec<u64> {
        self.indices.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Gap value -> count.
    pub fn gap_table(&self) -> BTreeMap<u64, usize> {
        let mut table = BTreeMap::new();
        for g in self.gaps() {
            *table.entry(g).or_insert(0) += 1;
        }
        table
    }
}

/// Recurrences of the rotation to the open arc of length `epsilon` about
/// `theta0` within `horizon` steps.
pub fn near_revivals(theta0: f64, nu1: f64, epsilon: f64, horizon: u64) -> Result<RecurrenceRecord> {
    if !(epsilon > 0.0 && epsilon < std::f64::consts::PI) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, π), got {epsilon}")));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least one step".into()));
    }
    if !nu1.is_finite() {
        return Err(Error::InvalidArgument(format!("nu1 = {nu1} is not finite")));
    }
    let half = epsilon / 2.0;
    let indices = (1..=horizon).filter(|&k| offset(nu1, k) < half).collect();
    Ok(RecurrenceRecord { epsilon, nu1, theta0: wrap(theta0), indices, horizon })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapStatistics {
    pub distinct_gaps: Vec<u64>,
    pub frequencies: Vec<usize>,
    /// At most three distinct gaps, and if three, the largest is the sum of
    /// the other two.
    pub three_gap_ok: bool,
}

pub fn gap_statistics(rec: &RecurrenceRecord) -> Result<GapStatistics> {
    if rec.indices.len() < 2 {
        return Err(Error::InsufficientRecurrences { got: rec.indices.len() });
    }
    let table = rec.gap_table();
    let distinct_gaps: Vec<u64> = table.keys().copied().collect();
    let frequencies = table.values().copied().collect();
    let three_gap_ok = match distinct_gaps.as_slice() {
        [_] | [_, _] => true,
        [a, b, c] => a + b == *c,
        _ => false,
    };
    Ok(GapStatistics { distinct_gaps, frequencies, three_gap_ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanRecurrence {
    pub empirical_mean: f64,
    pub ergodic_prediction: f64,
}

/// Mean time between near revivals against the ergodic value `2π T / eps`.
pub fn mean_recurrence(rec: &RecurrenceRecord, period: f64) -> Result<MeanRecurrence> {
    let n = rec.indices.len();
    if n < 2 {
        return Err(Error::InsufficientRecurrences { got: n });
    }
    let span = (rec.indices[n - 1] - rec.indices[0]) as f64;
    Ok(MeanRecurrence {
        empirical_mean: span / (n - 1) as f64 * period,
        ergodic_prediction: ergodic_mean(rec.epsilon, period),
    })
}

pub fn ergodic_mean(epsilon: f64, period: f64) -> f64 {
    TAU * period / epsilon
}

/// Whether `nu1 / 2π` (as stored) is an exact fraction with denominator
/// within `horizon`, in which case the orbit is periodic inside the window
/// being examined. Returns the period if so.
pub fn periodic_within(nu1: f64, horizon: u64) -> Option<u64> {
    contfrac::exact_period(wrap(nu1) / TAU, horizon)
}

/// One seeded random trial of the three-gap experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapTrial {
    pub trial: usize,
    pub nu1: f64,
    pub epsilon: f64,
    pub recurrences: usize,
    pub distinct_gaps: Vec<u64>,
    pub three_gap_ok: bool,
    /// `None` when the orbit is not periodic within the horizon.
    pub period_within_horizon: Option<u64>,
    /// Smallest closed-form overlap `exp[2|z|^2 (cos k nu1 - 1)]` over the
    /// recurrences, for each requested `|z|`.
    pub min_correlation: Vec<f64>,
}

/// `trials` rotations with `nu1` uniform on `(0, 2π)` and `epsilon` drawn from
/// `epsilons`, each generated from its own ChaCha stream seeded by
/// `(seed, trial)`.
pub fn three_gap_trials(
    seed: u64,
    trials: usize,
    horizon: u64,
    epsilons: &[f64],
    z_moduli: &[f64],
) -> Result<Vec<GapTrial>> {
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("no epsilon values to draw from".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let mut nu1 = rng.gen_range(0.0..TAU);
            while nu1 == 0.0 {
                nu1 = rng.gen_range(0.0..TAU);
            }
            let epsilon = epsilons[rng.gen_range(0..epsilons.len())];
            let rec = near_revivals(0.0, nu1, epsilon, horizon)?;
            let stats = gap_statistics(&rec)?;
            let min_correlation = z_moduli
                .iter()
                .map(|&z| {
                    rec.indices
                        .iter()
                        .map(|&k| (2.0 * z * z * (mul_mod_tau(k as f64, nu1).cos() - 1.0)).exp())
                        .fold(1.0, f64::min)
                })
                .collect();
            Ok(GapTrial {
                trial,
                nu1,
                epsilon,
                recurrences: rec.indices.len(),
                distinct_gaps: stats.distinct_gaps,
                three_gap_ok: stats.three_gap_ok,
                period_within_horizon: periodic_within(nu1, horizon),
                min_correlation,
            })
        })
        .collect()
}

/// `2π / φ`, the golden rotation used as the canonical "most irrational" case.
pub fn golden_rotation() -> f64 {
    TAU * (5f64.sqrt() - 1.0) / 2.0
}
