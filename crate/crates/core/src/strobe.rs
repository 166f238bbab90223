//! Stroboscopic evolution at the instants `kT` of a cyclic parameter drive.
//!
//! Each cycle multiplies level `n` by `exp[i (nu0 + nu1 n + nu2 n^2)]`, with
//! `nu_i = theta_i - (1/hbar) ∫_0^T c_i(t) dt` combining geometric and
//! dynamical phases.

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::berry::{trapezoid, PhaseProfile};
use crate::error::{Error, Result};
use crate::packets::WavePacket;
use crate::phase::{mul_mod_tau, wrap, wrap_signed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuCoefficients {
    /// `nu_i mod 2π`, in `[-π, π)` so that a cancelled coefficient stays
    /// exactly as small as it was computed.
    pub nu: [f64; 3],
    /// Unreduced values.
    pub raw: [f64; 3],
    pub period: f64,
}

impl NuCoefficients {
    pub fn new(raw: [f64; 3], period: f64) -> Self {
        Self { nu: raw.map(wrap_signed), raw, period }
    }

    pub fn nu0(&self) -> f64 {
        self.nu[0]
    }

    pub fn nu1(&self) -> f64 {
        self.nu[1]
    }

    pub fn nu2(&self) -> f64 {
        self.nu[2]
    }
}

fn check_coverage(traj: &[(f64, f64)], period: f64) -> Result<()> {
    let (Some(first), Some(last)) = (traj.first(), traj.last()) else {
        return Err(Error::TrajectoryGap { start: f64::NAN, end: f64::NAN, period });
    };
    let tol = 1e-9 * period;
    if first.0.abs() > tol || (last.0 - period).abs() > tol || traj.windows(2).any(|w| w[1].0 < w[0].0) {
        return Err(Error::TrajectoryGap { start: first.0, end: last.0, period });
    }
    Ok(())
}

/// `nu_i = theta_i - (1/hbar) ∫_0^T c_i(t) dt` by the trapezoidal rule.
pub fn nu_from(
    theta: &PhaseProfile,
    c_trajectories: &[Vec<(f64, f64)>; 3],
    hbar: f64,
    period: f64,
) -> Result<NuCoefficients> {
    if !(hbar > 0.0) || !(period > 0.0) {
        return Err(Error::InvalidArgument(format!("need hbar > 0 and T > 0 (hbar = {hbar}, T = {period})")));
    }
    let mut raw = [0.0; 3];
    for (i, traj) in c_trajectories.iter().enumerate() {
        check_coverage(traj, period)?;
        raw[i] = theta.coefficients()[i] - trapezoid(traj) / hbar;
    }
    Ok(NuCoefficients::new(raw, period))
}

/// Total phase `k (nu0 + nu1 n + nu2 n^2) mod 2π` for level `n`.
fn level_phase(nu: &NuCoefficients, k: u64, n: usize) -> f64 {
    let (k, n) = (k as f64, n as f64);
    wrap(mul_mod_tau(k, nu.nu[0]) + mul_mod_tau(k * n, nu.nu[1]) + mul_mod_tau(k * n * n, nu.nu[2]))
}

/// `U(kT) psi`: level `n` times `exp[i k (nu0 + nu1 n + nu2 n^2)]`.
pub fn strobe_evolve(psi: &WavePacket, nu: &NuCoefficients, k: u64) -> WavePacket {
    let mut out = psi.clone();
    for (n, a) in out.amplitudes_mut().iter_mut().enumerate() {
        *a *= Complex64::from_polar(1.0, level_phase(nu, k, n));
    }
    out
}

/// Closed-form overlap for a coherent packet once `nu2 = 0`:
/// `exp[2 |z|^2 (cos k nu1 - 1)]`.
pub fn strobe_correlation(z: Complex64, nu1: f64, k: u64) -> f64 {
    (2.0 * z.norm_sqr() * (mul_mod_tau(k as f64, nu1).cos() - 1.0)).exp()
}

/// Phase of the coherent label after `k` steps, `arg z + k nu1 mod 2π`.
pub fn label_phase(z: Complex64, nu1: f64, k: u64) -> f64 {
    wrap(wrap(z.arg()) + mul_mod_tau(k as f64, nu1))
}

/// `(r, s)` with `2 <= s <= s_max`, `1 <= r < 2s`, coprime: the genuine
/// multi-packet fractional revivals.
fn cat_pairs(s_max: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=s_max).flat_map(|s| (1..2 * s).filter(move |r| r.gcd(&s) == 1).map(move |r| (r, s)))
}

/// Largest overlap between `psi(kT)` and an `(r, s)` fractional-revival cat of
/// the initial packet with the same centroid rotation, over `2 <= s <= s_max`.
///
/// With level populations `p_n` this is
/// `max_{r,s} |sum_n p_n exp(i n^2 (k nu2 + pi r / s))|^2`: the linear phase
/// cancels and only the residual quadratic phase matters.
pub fn cat_overlap(populations: &[f64], nu: &NuCoefficients, k: u64, s_max: u64) -> (f64, Option<(u64, u64)>) {
    let quad: Vec<f64> = (0..populations.len()).map(|n| mul_mod_tau(k as f64 * (n * n) as f64, nu.nu[2])).collect();
    let mut best = (0.0, None);
    for (r, s) in cat_pairs(s_max) {
        let amp: Complex64 = populations
            .iter()
            .enumerate()
            .map(|(n, &p)| {
                // n^2 r / s mod 2, exactly
                let m = 2 * s;
                let frac = ((n as u64 * n as u64) % m * r) % m;
                let angle = quad[n] + std::f64::consts::PI * frac as f64 / s as f64;
                p * Complex64::from_polar(1.0, angle)
            })
            .sum();
        let v = amp.norm_sqr();
        if v > best.0 {
            best = (v, Some((r, s)));
        }
    }
    best
}

/// Steps `1..=horizon` at which some fractional-revival cat overlap exceeds
/// `threshold`.
pub fn fractional_events(
    populations: &[f64],
    nu: &NuCoefficients,
    horizon: u64,
    s_max: u64,
    threshold: f64,
) -> Vec<u64> {
    (1..=horizon).filter(|&k| cat_overlap(populations, nu, k, s_max).0 > threshold).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::{coherent_packet, correlation};
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_coefficients() {
        let traj = |v: f64| vec![(0.0, v), (0.5, v), (2.0, v)];
        let nu = nu_from(&PhaseProfile::exact(0.0, 0.0, 0.0), &[traj(1.0), traj(-0.5), traj(0.25)], 2.0, 2.0).unwrap();
        assert_eq!(nu.raw, [-1.0, 0.5, -0.25]);
        assert_eq!(nu.nu[0], -1.0);
    }

    #[test]
    fn cancelled_nu2() {
        let c2: Vec<(f64, f64)> = (0..=20).map(|i| (i as f64 / 20.0, -1.0 - 0.1 * (i as f64).sin())).collect();
        let theta2 = trapezoid(&c2) / 1.0;
        let flat = vec![(0.0, 0.0), (1.0, 0.0)];
        let nu = nu_from(&PhaseProfile::exact(0.0, 0.3, theta2), &[flat.clone(), flat, c2], 1.0, 1.0).unwrap();
        assert!(nu.raw[2].abs() < 1e-15);
    }

    #[test]
    fn reversed_trajectory_integrates_the_same() {
        let fwd: Vec<(f64, f64)> = (0..=30).map(|i| (i as f64 / 30.0, (i as f64 * 0.2).cos())).collect();
        let rev: Vec<(f64, f64)> = fwd.iter().rev().map(|&(t, v)| (1.0 - t, v)).collect();
        assert!((trapezoid(&fwd) - trapezoid(&rev)).abs() < 1e-14);
    }

    #[test]
    fn gaps_are_rejected() {
        let short = vec![(0.0, 1.0), (0.5, 1.0)];
        let full = vec![(0.0, 1.0), (1.0, 1.0)];
        let err = nu_from(&PhaseProfile::exact(0.0, 0.0, 0.0), &[full.clone(), short, full], 1.0, 1.0);
        assert!(matches!(err, Err(Error::TrajectoryGap { .. })));
    }

    #[test]
    fn full_turn_is_identity() {
        let psi = coherent_packet(c(1.5, 0.5), 1e-12, None).unwrap();
        let nu = NuCoefficients::new([0.0, TAU, 0.0], 1.0);
        for k in [1, 7, 1000] {
            let out = strobe_evolve(&psi, &nu, k);
            for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn stays_coherent_without_nu2() {
        let z = c(2.0, 0.0);
        let psi = coherent_packet(z, 1e-12, None).unwrap();
        let nu = NuCoefficients::new([0.4, 1.234, 0.0], 1.0);
        for k in [1, 2, 17, 999] {
            let out = strobe_evolve(&psi, &nu, k);
            let zk = z * Complex64::from_polar(1.0, mul_mod_tau(k as f64, nu.nu1()));
            assert!(out.coherent_ratio_defect(zk) < 1e-10);
            let target = coherent_packet(zk, 1e-12, None).unwrap();
            assert!((correlation(&target, &out) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(strobe_correlation(c(1.3, 0.2), 0.77, 0), 1.0);
        assert!((strobe_correlation(c(1.0, 0.0), PI, 1) - (-4.0f64).exp()).abs() < 1e-15);
        assert!((strobe_correlation(c(1.0, 0.0), TAU / 3.0, 3) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn semigroup() {
        let psi = coherent_packet(c(1.0, -1.0), 1e-12, None).unwrap();
        let nu = NuCoefficients::new([0.3, 2.1, 0.77], 1.0);
        let once = strobe_evolve(&psi, &nu, 130);
        let twice = strobe_evolve(&strobe_evolve(&psi, &nu, 100), &nu, 30);
        for (a, b) in once.amplitudes().iter().zip(twice.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn cat_overlap_detects_half_revival() {
        let psi = coherent_packet(c(2.0, 0.0), 1e-12, None).unwrap();
        let pops = psi.populations();
        // k nu2 = -pi/2 at k = 1 is the (1, 2) cat
        let nu = NuCoefficients::new([0.0, 0.0, -PI / 2.0], 1.0);
        let (v, pair) = cat_overlap(&pops, &nu, 1, 4);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(pair, Some((1, 2)));
        // with nu2 = 0 the best cat overlap is about one half
        let flat = NuCoefficients::new([0.0, 1.0, 0.0], 1.0);
        let (v, _) = cat_overlap(&pops, &flat, 5, 4);
        assert!(v < 0.6, "{v}");
    }
}
