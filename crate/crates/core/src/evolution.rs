//! Continuous-time evolution under a quadratic spectrum, autocorrelation
//! scans and revival classification.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::contfrac;
use crate::error::{Error, Result};
use crate::packets::WavePacket;
use crate::spectra::QuadraticSpectrum;

/// `U(t) psi`: multiplies level `n` by `exp(-i E_n t / hbar)`.
///
/// The global phase from `c0` is kept in the amplitudes.
pub fn evolve(psi: &WavePacket, spec: &QuadraticSpectrum, t: f64) -> Result<WavePacket> {
    spec.check_level(psi.n_trunc())?;
    let mut out = psi.clone();
    for (n, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let phase = -spec.energy_unchecked(n) * t / spec.hbar;
        *a *= Complex64::from_polar(1.0, phase);
    }
    Ok(out)
}

/// `C(t) = |<psi(0)|psi(t)>|^2` from level populations alone.
fn correlation_at(populations: &[f64], spec: &QuadraticSpectrum, t: f64) -> f64 {
    let amp: Complex64 = populations
        .iter()
        .enumerate()
        .map(|(n, &p)| p * Complex64::from_polar(1.0, -spec.energy_unchecked(n) * t / spec.hbar))
        .sum();
    amp.norm_sqr().min(1.0)
}

/// One `(t, C(t))` pair per grid point, in grid order.
pub fn autocorrelation_scan(psi: &WavePacket, spec: &QuadraticSpectrum, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    spec.check_level(psi.n_trunc())?;
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("time grid is empty".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite time {t} in grid")));
    }
    let pops = psi.populations();
    Ok(t_grid.par_iter().map(|&t| (t, correlation_at(&pops, spec, t))).collect())
}

/// `points + 1` equally spaced times from `t_min` to `t_max` inclusive.
pub fn linear_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    if points == 0 {
        return vec![t_min];
    }
    let span = t_max - t_min;
    (0..=points).map(|i| t_min + span * i as f64 / points as f64).collect()
}

/// Grid times that are local maxima of `C` and exceed `threshold`.
pub fn revival_peaks(series: &[(f64, f64)], threshold: f64) -> Vec<f64> {
    let n = series.len();
    (0..n)
        .filter(|&i| {
            let c = series[i].1;
            c > threshold && (i == 0 || c >= series[i - 1].1) && (i + 1 == n || c >= series[i + 1].1)
        })
        .map(|i| series[i].0)
        .collect()
}

/// First grid time in `(0, t_max]` at which `C` exceeds `threshold`.
pub fn first_revival(
    psi: &WavePacket,
    spec: &QuadraticSpectrum,
    t_max: f64,
    points: usize,
    threshold: f64,
) -> Result<Option<f64>> {
    let grid = linear_grid(0.0, t_max, points);
    let series = autocorrelation_scan(psi, spec, &grid[1..])?;
    Ok(series.into_iter().find(|&(_, c)| c > threshold).map(|(t, _)| t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RevivalCase {
    /// `c2 = 0`: equally spaced levels.
    Linear,
    /// `c1 = 0`.
    PureQuadratic,
    /// `c1 / c2 = r / s`.
    Rational,
    /// `c1 / c2` has no convergent within tolerance: only near revivals.
    Irrational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevivalClassification {
    pub case: RevivalCase,
    pub t_rev: Option<f64>,
    /// `c1 / c2 = r / s` in lowest terms, `s > 0`.
    pub r_over_s: Option<(i64, u64)>,
    /// `|c1/c2 - r/s|` for the accepted convergent, or the error of the best
    /// convergent tried when the ratio is classified irrational.
    pub approximation_quality: f64,
    /// Sign of `c2`; revival times always use `|c2|`.
    pub c2_sign: i32,
}

/// Sorts a spectrum into the four revival regimes.
///
/// Rationality of `c1 / c2` is decided by continued-fraction convergents with
/// denominator at most `s_max` that agree within `rat_tol`.
pub fn classify_revivals(spec: &QuadraticSpectrum, rat_tol: f64, s_max: u64) -> Result<RevivalClassification> {
    let (c1, c2, hbar) = (spec.c1, spec.c2, spec.hbar);
    if c1 == 0.0 && c2 == 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    let c2_sign = spec.c2_sign();
    if c2 == 0.0 {
        return Ok(RevivalClassification {
            case: RevivalCase::Linear,
            t_rev: Some(TAU * hbar / c1.abs()),
            r_over_s: None,
            approximation_quality: 0.0,
            c2_sign,
        });
    }
    if c1 == 0.0 {
        return Ok(RevivalClassification {
            case: RevivalCase::PureQuadratic,
            t_rev: Some(TAU * hbar / c2.abs()),
            r_over_s: None,
            approximation_quality: 0.0,
            c2_sign,
        });
    }
    let ratio = c1 / c2;
    let convergents = contfrac::convergents(ratio, s_max);
    match convergents.iter().find(|c| c.error < rat_tol) {
        Some(c) if c.p.unsigned_abs() <= i64::MAX as u128 => Ok(RevivalClassification {
            case: RevivalCase::Rational,
            t_rev: Some(TAU * hbar * c.q as f64 / c2.abs()),
            r_over_s: Some((c.p as i64, c.q)),
            approximation_quality: c.error,
            c2_sign,
        }),
        _ => Ok(RevivalClassification {
            case: RevivalCase::Irrational,
            t_rev: None,
            r_over_s: None,
            approximation_quality: convergents.last().map_or(f64::INFINITY, |c| c.error),
            c2_sign,
        }),
    }
}
