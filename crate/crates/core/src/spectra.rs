//! Energy-spectrum models.
//!
//! Every model reduces to a [`QuadraticSpectrum`] `E_n = c0 + c1 n + c2 n^2`,
//! which is what the evolution code consumes. The Pöschl-Teller well has a
//! finite number of bound states, so its quadratic form carries a level cap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadratic energy law `E_n = c0 + c1 n + c2 n^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticSpectrum {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub hbar: f64,
    /// Highest admissible level for finite spectra.
    pub n_max: Option<usize>,
}

impl QuadraticSpectrum {
    pub fn new(c0: f64, c1: f64, c2: f64, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        if !(c0.is_finite() && c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidArgument("spectrum coefficients must be finite".into()));
        }
        Ok(Self { c0, c1, c2, hbar, n_max: None })
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    /// Equally spaced spectrum `E_n = c1 n`.
    pub fn linear(c1: f64, hbar: f64) -> Result<Self> {
        Self::new(0.0, c1, 0.0, hbar)
    }

    /// Kerr-medium spectrum `E_n = kappa n (n - 1)`, from the Hamiltonian `a†² a²`.
    pub fn kerr(kappa: f64, hbar: f64) -> Result<Self> {
        Self::new(0.0, -kappa, kappa, hbar)
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        match self.n_max {
            Some(n_max) if n > n_max => Err(Error::LevelOutOfRange { n, n_max }),
            _ => Ok(()),
        }
    }

    /// `c0 + c1 n + c2 n^2`, rejecting levels above the cap.
    pub fn energy(&self, n: usize) -> Result<f64> {
        self.check_level(n)?;
        Ok(self.energy_unchecked(n))
    }

    #[inline]
    pub(crate) fn energy_unchecked(&self, n: usize) -> f64 {
        let n = n as f64;
        self.c0 + self.c1 * n + self.c2 * n * n
    }

    /// Sign of the quadratic coefficient: +1, -1, or 0 for a linear spectrum.
    pub fn c2_sign(&self) -> i32 {
        if self.c2 > 0.0 {
            1
        } else if self.c2 < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Parameters of `H = A p^2 + B (p tanh x + tanh x p) - (C + B^2/A) sech^2 x + B^2/A`,
/// which is unitarily equivalent to `A p^2 - C sech^2 x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoschlTellerParams {
    pub a: f64,
    pub c: f64,
    pub hbar: f64,
    #[serde(default)]
    pub b: f64,
}

/// Closed-form bound-state spectrum of the Pöschl-Teller well.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtSpectrum {
    pub eta: f64,
    pub levels: Vec<f64>,
    pub n_max: usize,
}

impl PoschlTellerParams {
    pub fn new(a: f64, c: f64, hbar: f64) -> Self {
        Self { a, c, hbar, b: 0.0 }
    }

    /// `eta = sqrt(1 + 4C / (A hbar^2))`.
    pub fn eta(&self) -> f64 {
        eta(self.a, self.c, self.hbar)
    }

    fn validate(&self) -> Result<f64> {
        if !(self.a > 0.0) || !(self.hbar > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Pöschl-Teller needs A > 0 and hbar > 0 (A = {}, hbar = {})",
                self.a, self.hbar
            )));
        }
        if !(self.c > 0.0) {
            return Err(Error::NoBoundStates { eta: self.eta() });
        }
        let eta = self.eta();
        if !(eta > 1.0) {
            return Err(Error::NoBoundStates { eta });
        }
        Ok(eta)
    }

    /// Highest bound level `floor((eta - 1) / 2)`.
    pub fn n_max(&self) -> Result<usize> {
        let eta = self.validate()?;
        Ok(level_cap(eta))
    }

    pub fn spectrum(&self) -> Result<PtSpectrum> {
        let eta = self.validate()?;
        let n_max = level_cap(eta);
        let scale = self.a * self.hbar * self.hbar;
        let levels = (0..=n_max)
            .map(|n| {
                let d = eta - 1.0 - 2.0 * n as f64;
                -scale * d * d / 4.0
            })
            .collect();
        Ok(PtSpectrum { eta, levels, n_max })
    }

    /// Expansion of the closed-form levels as `c0 + c1 n + c2 n^2`.
    pub fn quadratic(&self) -> Result<QuadraticSpectrum> {
        let eta = self.validate()?;
        let scale = self.a * self.hbar * self.hbar;
        let q =
            QuadraticSpectrum::new(-scale * (eta - 1.0) * (eta - 1.0) / 4.0, scale * (eta - 1.0), -scale, self.hbar)?;
        Ok(q.with_n_max(level_cap(eta)))
    }
}

pub fn eta(a: f64, c: f64, hbar: f64) -> f64 {
    (1.0 + 4.0 * c / (a * hbar * hbar)).sqrt()
}

pub(crate) fn level_cap(eta: f64) -> usize {
    ((eta - 1.0) / 2.0).floor().max(0.0) as usize
}

/// Free functions mirroring the operation names.
pub fn energy(spec: &QuadraticSpectrum, n: usize) -> Result<f64> {
    spec.energy(n)
}

pub fn pt_spectrum(p: &PoschlTellerParams) -> Result<PtSpectrum> {
    p.spectrum()
}

pub fn pt_quadratic(p: &PoschlTellerParams) -> Result<QuadraticSpectrum> {
    p.quadratic()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_kerr_energies() {
        let lin = QuadraticSpectrum::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(lin.energy(3).unwrap(), 3.0);
        let kerr = QuadraticSpectrum::kerr(1.0, 1.0).unwrap();
        assert_eq!(kerr.energy(4).unwrap(), 12.0);
        for n in 0..200 {
            let e = kerr.energy(n).unwrap();
            assert_eq!(e % 2.0, 0.0, "n = {n}");
        }
    }

    #[test]
    fn pt_derived_coefficients() {
        let q = QuadraticSpectrum::new(-4.0, 4.0, -1.0, 1.0).unwrap();
        assert_eq!(q.energy(1).unwrap(), -1.0);

        let p = PoschlTellerParams::new(1.0, 6.0, 1.0);
        let s = p.spectrum().unwrap();
        assert_eq!(s.eta, 5.0);
        assert_eq!(s.levels, vec![-4.0, -1.0, 0.0]);
        assert_eq!(s.n_max, 2);
        let q = p.quadratic().unwrap();
        assert_eq!((q.c0, q.c1, q.c2, q.n_max), (-4.0, 4.0, -1.0, Some(2)));

        let p = PoschlTellerParams::new(1.0, 2.0, 1.0);
        let s = p.spectrum().unwrap();
        assert_eq!((s.eta, s.levels.clone(), s.n_max), (3.0, vec![-1.0, 0.0], 1));
        let q = p.quadratic().unwrap();
        assert_eq!((q.c0, q.c1, q.c2, q.n_max), (-1.0, 2.0, -1.0, Some(1)));
    }

    #[test]
    fn level_cap_is_enforced() {
        let q = PoschlTellerParams::new(1.0, 6.0, 1.0).quadratic().unwrap();
        assert!(q.energy(2).is_ok());
        assert_eq!(q.energy(3), Err(Error::LevelOutOfRange { n: 3, n_max: 2 }));
    }

    #[test]
    fn vanishing_well_has_no_bound_states() {
        for c in [0.0, -1.0] {
            let p = PoschlTellerParams::new(1.0, c, 1.0);
            assert!(matches!(p.spectrum(), Err(Error::NoBoundStates { .. })));
        }
        // tiny positive depth still binds one level
        let p = PoschlTellerParams::new(1.0, 1e-9, 1.0);
        assert_eq!(p.spectrum().unwrap().n_max, 0);
    }

    #[test]
    fn fractional_instants_use_a_hbar() {
        for &(a, c, hbar) in &[(1.0, 6.0, 1.0), (0.7, 3.0, 1.3), (2.5, 40.0, 0.5)] {
            let q = PoschlTellerParams::new(a, c, hbar).quadratic().unwrap();
            assert!((q.c2.abs() - a * hbar * hbar).abs() < 1e-14);
            let (r, s) = (3.0, 7.0);
            let t = std::f64::consts::PI * hbar * r / (q.c2.abs() * s);
            let t_stated = std::f64::consts::PI * r / (a * hbar * s);
            assert!((t - t_stated).abs() < 1e-12 * t_stated);
        }
    }

    #[test]
    fn quadratic_matches_closed_form_levels() {
        let mut a = 0.3;
        while a < 3.0 {
            let mut c = 0.2;
            while c < 60.0 {
                let p = PoschlTellerParams::new(a, c, 0.9);
                let s = p.spectrum().unwrap();
                let q = p.quadratic().unwrap();
                assert_eq!(q.n_max, Some(s.n_max));
                for (n, &e) in s.levels.iter().enumerate() {
                    let got = q.energy(n).unwrap();
                    let scale = s.levels[0].abs().max(1.0);
                    assert!((got - e).abs() <= 1e-12 * scale, "a={a} c={c} n={n}");
                }
                assert!(s.levels.windows(2).all(|w| w[0] < w[1]));
                assert!(s.levels.iter().all(|&e| e <= 0.0));
                c *= 1.7;
            }
            a += 0.45;
        }
    }
}
