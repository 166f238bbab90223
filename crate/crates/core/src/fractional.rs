//! Fractional revivals.
//!
//! At `t* = pi hbar r / (|c2| s)` the quadratic phase `exp(-i pi n^2 r / s)`
//! is periodic in `n` with period `l`, so it expands into `l` linear phases:
//!
//! ```text
//! U(t*) = e^{-i c0 t*/hbar} sum_p a_p U_p,   U_p |phi_n> = e^{-i n theta_p} |phi_n>
//! a_p   = (1/l) sum_{k<l} exp(-i pi k^2 r/s + 2 pi i k p / l)
//! theta_p = pi (c1 r / (|c2| s) + 2p / l)
//! ```
//!
//! Applied to a coherent state this yields a superposition of `l` rotated
//! coherent states (a "cat").

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::evolve;
use crate::packets::{coherent_packet, WavePacket};
use crate::spectra::QuadraticSpectrum;

/// Weights below this magnitude are left out of reports.
pub const PRUNE_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalDecomposition {
    pub r: u64,
    pub s: u64,
    /// Period of `k -> exp(-i pi k^2 r / s)`.
    pub l: u64,
    pub a: Vec<Complex64>,
    pub theta: Vec<f64>,
    pub t_star: f64,
    /// Phase `-c0 t* / hbar` common to every component.
    pub global_phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub p: u64,
    pub re_a: f64,
    pub im_a: f64,
    pub theta: f64,
}

impl FractionalDecomposition {
    /// Components whose weight survives pruning.
    pub fn components(&self) -> Vec<Component> {
        self.a
            .iter()
            .zip(&self.theta)
            .enumerate()
            .filter(|(_, (a, _))| a.norm() > PRUNE_WEIGHT)
            .map(|(p, (a, &theta))| Component { p: p as u64, re_a: a.re, im_a: a.im, theta })
            .collect()
    }

    pub fn weight_norm(&self) -> f64 {
        self.a.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Minimal period of `k -> exp(-i pi k^2 r / s)` for coprime `r, s`:
/// `s` when `r s` is even, `2 s` when it is odd.
pub fn gauss_period(r: u64, s: u64) -> u64 {
    if (r * s).is_multiple_of(2) {
        s
    } else {
        2 * s
    }
}

/// `exp(-i pi k^2 r / s)` with the exponent reduced exactly in integers.
fn quadratic_phase(k: u64, r: i64, s: u64) -> Complex64 {
    // k^2 r mod 2s, so the angle stays in [0, 2 pi)
    let m = (2 * s) as i128;
    let num = ((k as i128 * k as i128 % m) * r as i128).rem_euclid(m);
    Complex64::from_polar(1.0, -PI * num as f64 / s as f64)
}

/// Gauss-sum weights `a_p` for signed `r` (the sign encodes the sign of `c2`).
pub fn gauss_weights(r: i64, s: u64, l: u64) -> Vec<Complex64> {
    let terms: Vec<Complex64> = (0..l).map(|k| quadratic_phase(k, r, s)).collect();
    (0..l)
        .map(|p| {
            let sum: Complex64 = terms
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    let kp = (k as u64 * p) % l;
                    t * Complex64::from_polar(1.0, 2.0 * PI * kp as f64 / l as f64)
                })
                .sum();
            sum / l as f64
        })
        .collect()
}

fn check_pair(r: u64, s: u64) -> Result<()> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidArgument(format!("r and s must be positive (r = {r}, s = {s})")));
    }
    if r.gcd(&s) != 1 {
        return Err(Error::NotCoprime { r, s });
    }
    if s > 1 << 20 {
        return Err(Error::InvalidArgument(format!("s = {s} is too large for direct summation")));
    }
    Ok(())
}

/// Finite decomposition of `U(t*)` at the fractional-revival instant for `(r, s)`.
pub fn decompose(r: u64, s: u64, spec: &QuadraticSpectrum) -> Result<FractionalDecomposition> {
    check_pair(r, s)?;
    if spec.c2 == 0.0 {
        return Err(Error::LinearSpectrum);
    }
    let c2_abs = spec.c2.abs();
    let l = gauss_period(r, s);
    // for c2 < 0 the quadratic phase runs backwards
    let signed_r = r as i64 * spec.c2_sign() as i64;
    let a = gauss_weights(signed_r, s, l);
    let base = spec.c1 * r as f64 / (c2_abs * s as f64);
    let theta = (0..l).map(|p| PI * (base + 2.0 * p as f64 / l as f64)).collect();
    let t_star = PI * spec.hbar * r as f64 / (c2_abs * s as f64);
    Ok(FractionalDecomposition { r, s, l, a, theta, t_star, global_phase: -spec.c0 * t_star / spec.hbar })
}

/// `e^{-i c0 t*/hbar} sum_p a_p |z e^{-i theta_p}>`, assembled in the level
/// basis. Not renormalized; the norm is checked against 1.
pub fn cat_state(z: Complex64, r: u64, s: u64, spec: &QuadraticSpectrum, tail_tol: f64) -> Result<WavePacket> {
    let dec = decompose(r, s, spec)?;
    cat_from_decomposition(z, &dec, spec, tail_tol)
}

pub fn cat_from_decomposition(
    z: Complex64,
    dec: &FractionalDecomposition,
    spec: &QuadraticSpectrum,
    tail_tol: f64,
) -> Result<WavePacket> {
    let reference = coherent_packet(z, tail_tol, spec.n_max)?;
    spec.check_level(reference.n_trunc())?;
    let mut amps = vec![Complex64::new(0.0, 0.0); reference.len()];
    let global = Complex64::from_polar(1.0, dec.global_phase);
    for (a, &theta) in dec.a.iter().zip(&dec.theta) {
        if a.norm() == 0.0 {
            continue;
        }
        let rotated = coherent_packet(z * Complex64::from_polar(1.0, -theta), tail_tol, spec.n_max)?;
        for (acc, c) in amps.iter_mut().zip(rotated.amplitudes()) {
            *acc += global * a * c;
        }
    }
    let cat = WavePacket::from_raw(amps, reference.tail_mass());
    let norm = cat.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Contract(format!("cat state norm {norm} differs from 1")));
    }
    Ok(cat)
}

/// `|| cat_state - U(t*) |z> ||_2`.
pub fn verify_decomposition(z: Complex64, r: u64, s: u64, spec: &QuadraticSpectrum, tail_tol: f64) -> Result<f64> {
    let dec = decompose(r, s, spec)?;
    let cat = cat_from_decomposition(z, &dec, spec, tail_tol)?;
    let direct = evolve(&coherent_packet(z, tail_tol, spec.n_max)?, spec, dec.t_star)?;
    Ok(cat.amplitudes().iter().zip(direct.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
}

/// Coprime pairs `(r, s)` with `1 <= s <= s_max` and `1 <= r < 2 s`, i.e.
/// every distinct fractional instant within one period of `exp(-i pi n^2 r/s)`.
pub fn coprime_pairs(s_max: u64) -> Vec<(u64, u64)> {
    (1..=s_max).flat_map(|s| (1..2 * s).filter(move |r| r.gcd(&s) == 1).map(move |r| (r, s))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::correlation;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kerr() -> QuadraticSpectrum {
        QuadraticSpectrum::kerr(1.0, 1.0).unwrap()
    }

    #[test]
    fn half_period_weights() {
        let d = decompose(1, 2, &kerr()).unwrap();
        assert_eq!(d.l, 2);
        assert!((d.a[0] - c(0.5, -0.5)).norm() < 1e-15);
        assert!((d.a[1] - c(0.5, 0.5)).norm() < 1e-15);
        for a in &d.a {
            assert!((a.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!((d.t_star - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn full_period_is_single_rotation() {
        let d = decompose(1, 1, &kerr()).unwrap();
        assert_eq!(d.l, 2);
        assert!(d.a[0].norm() < 1e-15);
        assert!((d.a[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(d.components().len(), 1);
    }

    #[test]
    fn rejects_bad_pairs() {
        assert_eq!(decompose(2, 4, &kerr()), Err(Error::NotCoprime { r: 2, s: 4 }));
        let lin = QuadraticSpectrum::linear(1.0, 1.0).unwrap();
        assert_eq!(decompose(1, 2, &lin), Err(Error::LinearSpectrum));
        assert!(decompose(0, 3, &kerr()).is_err());
    }

    #[test]
    fn third_period_cat_has_three_components() {
        let d = decompose(1, 3, &kerr()).unwrap();
        assert_eq!(d.l, 6);
        assert!(d.components().len() <= 3);
        assert!(d.components().len() >= 2);
        let cat = cat_state(c(2.0, 0.0), 1, 3, &kerr(), 1e-12).unwrap();
        assert!((cat.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vacuum_cat_is_vacuum() {
        let vac = coherent_packet(c(0.0, 0.0), 1e-12, None).unwrap();
        for (r, s) in [(1, 2), (1, 3), (3, 4), (5, 7)] {
            let cat = cat_state(c(0.0, 0.0), r, s, &kerr(), 1e-12).unwrap();
            assert!((correlation(&vac, &cat) - 1.0).abs() < 1e-12);
            assert!(verify_decomposition(c(0.0, 0.0), r, s, &kerr(), 1e-12).unwrap() < 1e-12);
        }
    }

    #[test]
    fn residual_examples() {
        assert!(verify_decomposition(c(2.0, 0.0), 1, 2, &kerr(), 1e-12).unwrap() < 1e-9);
        assert!(verify_decomposition(c(1.0, 0.0), 1, 4, &kerr(), 1e-12).unwrap() < 1e-9);
    }

    #[test]
    fn negative_c2_spectrum_decomposes() {
        // irrational-ish coefficients with c2 < 0
        let spec = QuadraticSpectrum::new(0.4, 0.77, -1.3, 0.8).unwrap();
        for (r, s) in coprime_pairs(6) {
            let res = verify_decomposition(c(1.2, -0.7), r, s, &spec, 1e-12).unwrap();
            assert!(res < 1e-9, "r={r} s={s} residual={res}");
        }
    }

    #[test]
    fn weights_are_unitary_for_all_small_pairs() {
        for s in 1..=50u64 {
            for r in 1..=50u64 {
                if r.gcd(&s) != 1 {
                    continue;
                }
                let l = gauss_period(r, s);
                let norm: f64 = gauss_weights(r as i64, s, l).iter().map(|a| a.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-12, "r={r} s={s}");
            }
        }
    }

    #[test]
    fn period_is_exact_and_minimal() {
        for (r, s) in coprime_pairs(12) {
            let l = gauss_period(r, s);
            let seq: Vec<Complex64> = (0..4 * l).map(|k| quadratic_phase(k, r as i64, s)).collect();
            let is_period = |d: u64| (0..(4 * l - d) as usize).all(|k| (seq[k] - seq[k + d as usize]).norm() < 1e-12);
            assert!(is_period(l), "r={r} s={s} l={l}");
            for d in 1..l {
                if l.is_multiple_of(d) {
                    assert!(!is_period(d), "r={r} s={s}: {d} is a smaller period than {l}");
                }
            }
        }
    }
}
