//! Initial wave packets over the level basis and their overlaps.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Largest discarded probability a level cap may cause before the packet is
/// considered unrepresentable.
pub const MAX_CAP_TAIL: f64 = 0.05;

/// Finite superposition `sum_n amplitudes[n] |phi_n>`, unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    amplitudes: Vec<Complex64>,
    tail_mass: f64,
}

impl WavePacket {
    /// Wraps raw amplitudes, normalizing them. `tail_mass` is the probability
    /// that was discarded before normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("packet needs at least one level".into()));
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument(format!("packet norm is {norm}")));
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(Self { amplitudes, tail_mass })
    }

    /// Takes amplitudes as they are, without renormalization.
    pub(crate) fn from_raw(amplitudes: Vec<Complex64>, tail_mass: f64) -> Self {
        Self { amplitudes, tail_mass }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Highest level carried by the packet.
    pub fn n_trunc(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Level populations `|c_n|^2`.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `<self|other>`, zero-padding the shorter packet.
    pub fn inner(&self, other: &WavePacket) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest deviation of `c_{n+1} / c_n` from `z / sqrt(n+1)`, i.e. how far
    /// the packet is from being a (truncated) coherent state with label `z`.
    pub fn coherent_ratio_defect(&self, z: Complex64) -> f64 {
        self.amplitudes
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].norm() > 0.0)
            .map(|(n, w)| (w[1] / w[0] - z / ((n + 1) as f64).sqrt()).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }
}

/// Picks the truncation index from unnormalized probabilities `probs` whose
/// exact total is `total`. Returns `(n_trunc, tail_mass)`.
fn choose_truncation(probs: &[f64], total: f64, tail_tol: f64, n_cap: Option<usize>) -> Result<(usize, f64)> {
    // suffix[n] = mass strictly above level n
    let mut suffix = vec![0.0; probs.len()];
    let mut acc = 0.0;
    for n in (0..probs.len()).rev() {
        suffix[n] = acc / total;
        acc += probs[n];
    }
    let mut n_trunc = suffix.iter().position(|&t| t < tail_tol).unwrap_or(probs.len() - 1);
    if let Some(cap) = n_cap {
        n_trunc = n_trunc.min(cap);
    }
    let tail_mass = suffix[n_trunc.min(probs.len() - 1)];
    if tail_mass > MAX_CAP_TAIL {
        return Err(Error::CapTooSmall { tail_mass });
    }
    Ok((n_trunc, tail_mass))
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if !(tail_tol > 0.0 && tail_tol <= 1e-3) {
        return Err(Error::InvalidArgument(format!("tail_tol must lie in (0, 1e-3], got {tail_tol}")));
    }
    Ok(())
}

/// Coherent state `|z> = e^{-|z|^2/2} sum_n z^n / sqrt(n!) |phi_n>`, truncated
/// where the Poisson tail drops below `tail_tol` (or at `n_cap`) and
/// renormalized.
///
/// Amplitudes come from the ratio recurrence `c_{n+1} = c_n z / sqrt(n+1)`;
/// factorials are never formed.
pub fn coherent_packet(z: Complex64, tail_tol: f64, n_cap: Option<usize>) -> Result<WavePacket> {
    check_tail_tol(tail_tol)?;
    let mean = z.norm_sqr();
    if !mean.is_finite() || mean > 1400.0 {
        return Err(Error::InvalidArgument(format!("|z|^2 = {mean} is too large")));
    }
    if mean == 0.0 {
        return Ok(WavePacket::from_raw(vec![Complex64::new(1.0, 0.0)], 0.0));
    }

    let mut amps = vec![Complex64::new((-mean / 2.0).exp(), 0.0)];
    // generate well past the mode until terms are negligible against tail_tol
    let floor = tail_tol * 1e-6;
    loop {
        let n = amps.len();
        let next = amps[n - 1] * z / (n as f64).sqrt();
        amps.push(next);
        if n as f64 > mean + 1.0 && next.norm_sqr() < floor {
            break;
        }
    }
    let probs: Vec<f64> = amps.iter().map(|c| c.norm_sqr()).collect();
    let (n_trunc, tail_mass) = choose_truncation(&probs, 1.0, tail_tol, n_cap)?;
    amps.truncate(n_trunc + 1);
    WavePacket::from_amplitudes(amps, tail_mass)
}

/// Real packet with `c_n ∝ exp(-(n - n0)^2 / (4 sigma^2))`, i.e. populations
/// Gaussian in `n` with standard deviation `sigma`.
pub fn gaussian_packet(n0: f64, sigma: f64, tail_tol: f64, n_cap: Option<usize>) -> Result<WavePacket> {
    check_tail_tol(tail_tol)?;
    if !(sigma > 0.0) || !n0.is_finite() || n0 < 0.0 {
        return Err(Error::InvalidArgument(format!("need sigma > 0 and n0 >= 0 (n0 = {n0}, sigma = {sigma})")));
    }
    let weight = |n: usize| {
        let d = n as f64 - n0;
        (-d * d / (4.0 * sigma * sigma)).exp()
    };
    let mut amps = Vec::new();
    let floor = tail_tol * 1e-6;
    let mut n = 0;
    loop {
        let w = weight(n);
        amps.push(w);
        if n as f64 > n0 && w * w < floor * 1e-6 {
            break;
        }
        n += 1;
    }
    let probs: Vec<f64> = amps.iter().map(|w| w * w).collect();
    let total: f64 = probs.iter().sum();
    let (n_trunc, tail_mass) = choose_truncation(&probs, total, tail_tol, n_cap)?;
    amps.truncate(n_trunc + 1);
    WavePacket::from_amplitudes(amps.into_iter().map(|w| Complex64::new(w, 0.0)).collect(), tail_mass)
}

/// Overlap function `|<psi0|psit>|^2`.
pub fn correlation(psi0: &WavePacket, psit: &WavePacket) -> f64 {
    psi0.inner(psit).norm_sqr().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Poisson tail above n computed in log space, independent of the recurrence.
    fn poisson_tail_above(mean: f64, n: usize) -> f64 {
        let mut tail = 0.0;
        let mut log_fact = (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
        for k in n + 1..n + 400 {
            log_fact += (k as f64).ln();
            tail += (-mean + k as f64 * mean.ln() - log_fact).exp();
        }
        tail
    }

    #[test]
    fn vacuum() {
        let p = coherent_packet(c(0.0, 0.0), 1e-12, None).unwrap();
        assert_eq!(p.amplitudes(), &[c(1.0, 0.0)]);
        assert_eq!(p.n_trunc(), 0);
        assert_eq!(p.tail_mass(), 0.0);
    }

    #[test]
    fn coherent_truncation_matches_poisson_tail() {
        let p = coherent_packet(c(2.0, 0.0), 1e-12, None).unwrap();
        let n = p.n_trunc();
        assert!(poisson_tail_above(4.0, n) < 1e-12);
        assert!(poisson_tail_above(4.0, n - 1) >= 1e-12);
        assert!((p.tail_mass() - poisson_tail_above(4.0, n)).abs() < 1e-15);
        assert!((p.amplitudes()[0].re - 0.1353352832366127).abs() < 1e-12);
    }

    #[test]
    fn cap_too_small() {
        let err = coherent_packet(c(3.0, 0.0), 1e-12, Some(2)).unwrap_err();
        match err {
            Error::CapTooSmall { tail_mass } => {
                let expected = 1.0 - (-9.0f64).exp() * (1.0 + 9.0 + 40.5);
                assert!((tail_mass - expected).abs() < 1e-12);
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(gaussian_packet(10.0, 2.0, 1e-12, Some(3)).is_err());
    }

    #[test]
    fn tail_tol_range() {
        assert!(coherent_packet(c(1.0, 0.0), 0.0, None).is_err());
        assert!(coherent_packet(c(1.0, 0.0), 1e-2, None).is_err());
    }

    #[test]
    fn gaussian_profiles() {
        let p = gaussian_packet(0.0, 1e-3, 1e-12, None).unwrap();
        assert!((p.amplitudes()[0].re - 1.0).abs() < 1e-12);
        assert!(p.amplitudes()[1..].iter().all(|a| a.norm() < 1e-12));

        let p = gaussian_packet(1.0, 0.5, 1e-12, Some(2)).unwrap();
        assert_eq!(p.len(), 3);
        // weights e^{-1}, 1, e^{-1} before normalization
        let w = [(-1.0f64).exp(), 1.0, (-1.0f64).exp()];
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (a, w) in p.amplitudes().iter().zip(w) {
            assert!((a.re - w / norm).abs() < 1e-14);
        }

        let p = gaussian_packet(5.0, 1.0, 1e-12, None).unwrap();
        let a = p.amplitudes();
        for d in 1..=5 {
            assert!((a[5 - d].re - a[5 + d].re).abs() < 1e-14);
        }
    }

    #[test]
    fn overlap_examples() {
        let p = coherent_packet(c(1.0, 0.0), 1e-12, None).unwrap();
        assert!((correlation(&p, &p) - 1.0).abs() < 1e-12);

        let a = WavePacket::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0)], 0.0).unwrap();
        let b = WavePacket::from_amplitudes(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], 0.0).unwrap();
        assert_eq!(correlation(&a, &b), 0.0);

        let q = coherent_packet(c(-1.0, 0.0), 1e-12, None).unwrap();
        assert!((correlation(&p, &q) - (-4.0f64).exp()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn coherent_invariants(re in -4.0f64..4.0, im in -4.0f64..4.0, re2 in -3.0f64..3.0, im2 in -3.0f64..3.0) {
            let z = c(re, im);
            let p = coherent_packet(z, 1e-12, None).unwrap();
            prop_assert!((p.norm() - 1.0).abs() < 1e-12);
            prop_assert!((correlation(&p, &p) - 1.0).abs() < 1e-12);
            prop_assert!(p.coherent_ratio_defect(z) < 1e-10);
            prop_assert!(p.tail_mass() < 1e-12);

            let q = coherent_packet(c(re2, im2), 1e-12, None).unwrap();
            prop_assert!((correlation(&p, &q) - correlation(&q, &p)).abs() < 1e-14);
            // |<z|w>|^2 = exp(-|z - w|^2); amplitude truncation errors scale as
            // sqrt(tail_tol), so compare with far deeper tails
            let (p, q) = (coherent_packet(z, 1e-26, None).unwrap(), coherent_packet(c(re2, im2), 1e-26, None).unwrap());
            let exact = (-(z - c(re2, im2)).norm_sqr()).exp();
            prop_assert!((correlation(&p, &q) - exact).abs() < 1e-10);
        }
    }
}
