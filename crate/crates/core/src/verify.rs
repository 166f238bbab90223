//! The acceptance checks as a library: each criterion recomputes its numbers
//! from scratch and reports the worst value seen against its limit.
//!
//! Reports carry no timings or host details, so a fixed seed gives a fixed
//! report.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::berry::{self, diagonalize_pt, fit_phase_profile, FTable, Grid, ParameterLoop};
use crate::evolution::{autocorrelation_scan, evolve, linear_grid};
use crate::fractional::{coprime_pairs, gauss_period, gauss_weights, verify_decomposition};
use crate::packets::{coherent_packet, correlation};
use crate::recurrence::{self, golden_rotation, mean_recurrence, near_revivals, GapTrial};
use crate::spectra::{PoschlTellerParams, QuadraticSpectrum};
use crate::strobe::{self, strobe_evolve};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Worst value of the checked quantity.
    pub metric: f64,
    pub limit: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub const CRITERIA: u32 = 10;

/// Trials, horizon and window sizes of the three-gap experiment.
pub const GAP_TRIALS: usize = 100;
pub const GAP_HORIZON: u64 = 1_000_000;
pub const GAP_EPSILONS: [f64; 3] = [0.02, 0.1, 0.5];
pub const BOUND_LABELS: [f64; 3] = [0.5, 1.0, 2.0];

fn result(id: u32, name: &'static str, metric: f64, limit: f64, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id, name, passed: passed && metric.is_finite(), metric, limit, detail }
}

fn failure(id: u32, name: &'static str, limit: f64, err: crate::Error) -> CriterionResult {
    CriterionResult { id, name, passed: false, metric: f64::NAN, limit, detail: format!("error: {err}") }
}

/// Cat states against direct evolution at every fractional instant with
/// `s <= 8`, Kerr spectrum.
pub fn fractional_exactness() -> CriterionResult {
    const NAME: &str = "fractional-revival exactness";
    let kerr = QuadraticSpectrum::kerr(1.0, 1.0).expect("valid");
    let mut worst = (0.0f64, (0, 0), 0.0);
    for (r, s) in coprime_pairs(8) {
        for z in [0.5, 1.0, 2.0] {
            match verify_decomposition(Complex64::new(z, 0.0), r, s, &kerr, 1e-14) {
                Ok(res) if res >= worst.0 => worst = (res, (r, s), z),
                Ok(_) => {}
                Err(e) => return failure(1, NAME, 1e-9, e),
            }
        }
    }
    let detail = format!("max residual at (r, s) = {:?}, z = {}", worst.1, worst.2);
    result(1, NAME, worst.0, 1e-9, worst.0 < 1e-9, detail)
}

/// `sum_p |a_p|^2 = 1` for coprime `r, s <= 50`.
pub fn gauss_unitarity() -> CriterionResult {
    let mut worst = (0.0f64, (0, 0));
    let mut pairs = 0;
    for s in 1..=50u64 {
        for r in 1..=50u64 {
            if num_integer::gcd(r, s) != 1 {
                continue;
            }
            pairs += 1;
            let a = gauss_weights(r as i64, s, gauss_period(r, s));
            let dev = (a.iter().map(|w| w.norm_sqr()).sum::<f64>() - 1.0).abs();
            if dev >= worst.0 {
                worst = (dev, (r, s));
            }
        }
    }
    let detail = format!("{pairs} pairs, worst at (r, s) = {:?}", worst.1);
    result(2, "Gauss-sum unitarity", worst.0, 1e-12, worst.0 < 1e-12, detail)
}

/// Kerr revivals at `π` and `2π`; no near-perfect revival for `c1/c2 = √2`.
pub fn kerr_revival() -> CriterionResult {
    const NAME: &str = "Kerr full revival / irrational scan";
    let run = || -> crate::Result<(f64, f64)> {
        let kerr = QuadraticSpectrum::kerr(1.0, 1.0)?;
        let mut worst_revival = 0.0f64;
        let labels = [
            Complex64::new(0.5, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::from_polar(3.0, 1.0),
            Complex64::new(-1.5, 2.0),
        ];
        for z in labels {
            let psi = coherent_packet(z, 1e-14, None)?;
            for t in [PI, TAU] {
                worst_revival = worst_revival.max(1.0 - correlation(&psi, &evolve(&psi, &kerr, t)?));
            }
        }
        let irr = QuadraticSpectrum::new(0.0, 2f64.sqrt(), 1.0, 1.0)?;
        let grid = linear_grid(0.0, 100.0, 100_000);
        let mut best = 0.0f64;
        for z in [1.0, 2.0, 3.0] {
            let psi = coherent_packet(Complex64::new(z, 0.0), 1e-14, None)?;
            let scan = autocorrelation_scan(&psi, &irr, &grid[1..])?;
            best = best.max(scan.iter().fold(0.0f64, |m, p| m.max(p.1)));
        }
        Ok((worst_revival, best))
    };
    match run() {
        Ok((deficit, best)) => {
            let passed = deficit < 1e-9 && best <= 1.0 - 1e-6;
            let detail = format!("1 - C at π, 2π: {deficit:e}; irrational scan max C = 1 - {:e}", 1.0 - best);
            result(3, NAME, deficit, 1e-9, passed, detail)
        }
        Err(e) => failure(3, NAME, 1e-9, e),
    }
}

pub const PT_CASES: [(f64, f64, f64); 3] = [(1.0, 6.0, 1.0), (1.0, 2.0, 1.0), (1.0, 30.0, 1.0)];

/// Largest bound-state energy error of the finite-difference solver.
pub fn pt_energy_error(a: f64, c: f64, hbar: f64, grid: &Grid) -> crate::Result<f64> {
    let exact = PoschlTellerParams::new(a, c, hbar).spectrum()?.levels;
    let fd = diagonalize_pt(a, c, hbar, grid)?;
    Ok(fd.energies.iter().zip(&exact).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// Grid energies within `1e-3` on `[-20, 20] x 2048`, with error ratio in
/// `[3.5, 4.5]` when the spacing is halved.
pub fn pt_spectrum() -> CriterionResult {
    const NAME: &str = "Pöschl-Teller grid spectrum";
    let grid = Grid::default();
    let mut worst = 0.0f64;
    let mut passed = true;
    let mut parts = Vec::new();
    for (a, c, hbar) in PT_CASES {
        let (coarse, fine) = match (pt_energy_error(a, c, hbar, &grid), pt_energy_error(a, c, hbar, &grid.refined())) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => return failure(4, NAME, 1e-3, e),
        };
        let ratio = coarse / fine;
        worst = worst.max(coarse);
        passed &= coarse < 1e-3 && (3.5..=4.5).contains(&ratio);
        parts.push(format!("(A, C) = ({a}, {c}): error {coarse:.3e}, ratio {ratio:.3}"));
    }
    result(4, NAME, worst, 1e-3, passed, parts.join("; "))
}

/// Rectangle loop in `(A, B)` around the six-level well `A = 1, C = 36`.
pub fn deep_well_loop() -> ParameterLoop {
    ParameterLoop::rectangle((0.9, 1.1), (0.0, 1.0), 36.0, 64, 1.0).expect("valid loop")
}

/// Quadratic fit of the Berry phases of a six-level well.
pub fn phase_profile() -> CriterionResult {
    const NAME: &str = "quadratic Berry-phase profile";
    let run = || -> crate::Result<(f64, usize)> {
        let lp = deep_well_loop();
        let levels = berry::common_levels(&lp, 1.0);
        let gammas = berry::berry_phases(&lp, levels, 1.0, &Grid::default(), 9)?;
        let indexed: Vec<(usize, f64)> = gammas.iter().copied().enumerate().collect();
        let fit = fit_phase_profile(&indexed)?;
        let scale = gammas.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        Ok((fit.fit_residual / scale, levels))
    };
    match run() {
        Ok((rel, levels)) => {
            let detail = format!("{levels} levels, fit residual / max|gamma| = {rel:.4e}");
            result(5, NAME, rel, 1e-3, rel < 1e-3 && levels == 6, detail)
        }
        Err(e) => failure(5, NAME, 1e-3, e),
    }
}

/// Tunes a loop around the three-level well so that `nu2 = 0`, then checks
/// that strobed coherent packets stay coherent and follow the closed form.
pub fn cancellation() -> CriterionResult {
    const NAME: &str = "fractional-revival cancellation";
    let run = || -> crate::Result<(f64, f64, f64)> {
        let hbar = 1.0;
        let lp = ParameterLoop::rectangle((0.6, 0.8), (0.0, 1.0), 6.0, 64, 1.0)?;
        let levels = berry::common_levels(&lp, hbar);
        let table = FTable::for_loop(&lp, levels, hbar, &Grid::default(), 9)?;
        let gammas =
            (0..levels).map(|n| Ok((n, berry::berry_phase(n, &lp, &table)?))).collect::<crate::Result<Vec<_>>>()?;
        let profile = fit_phase_profile(&gammas)?;
        let (tuned, profile) = berry::tune_period(&lp, &profile, hbar)?;
        let nu = strobe::nu_from(&profile, &tuned.coefficient_trajectories(hbar)?, hbar, tuned.period())?;

        let mut defect = 0.0f64;
        let mut closed_form = 0.0f64;
        for z in [Complex64::new(1.0, 0.0), Complex64::new(1.5, 0.5), Complex64::new(0.0, -2.0)] {
            let psi = coherent_packet(z, 1e-14, None)?;
            for k in 1..=10_000u64 {
                let out = strobe_evolve(&psi, &nu, k);
                let zk = z * Complex64::from_polar(1.0, crate::phase::mul_mod_tau(k as f64, nu.nu1()));
                defect = defect.max(out.coherent_ratio_defect(zk));
                closed_form =
                    closed_form.max((correlation(&psi, &out) - strobe::strobe_correlation(z, nu.nu1(), k)).abs());
            }
        }
        Ok((nu.raw[2].abs(), defect, closed_form))
    };
    match run() {
        Ok((nu2, defect, cf)) => {
            let passed = nu2 < 1e-10 && defect < 1e-10 && cf < 1e-10;
            let detail = format!("|nu2| = {nu2:e}, ratio defect {defect:e}, closed-form deviation {cf:e}");
            result(6, NAME, nu2.max(defect).max(cf), 1e-10, passed, detail)
        }
        Err(e) => failure(6, NAME, 1e-10, e),
    }
}

/// The seeded trials shared by the three-gap and near-revival criteria.
pub fn gap_trials(seed: u64) -> crate::Result<Vec<GapTrial>> {
    recurrence::three_gap_trials(seed, GAP_TRIALS, GAP_HORIZON, &GAP_EPSILONS, &BOUND_LABELS)
}

pub fn three_gap(trials: &crate::Result<Vec<GapTrial>>) -> CriterionResult {
    const NAME: &str = "three-gap law";
    match trials {
        Ok(trials) => {
            let bad = trials.iter().filter(|t| !t.three_gap_ok).count();
            let most = trials.iter().map(|t| t.distinct_gaps.len()).max().unwrap_or(0);
            let with_three = trials.iter().filter(|t| t.distinct_gaps.len() == 3).count();
            let detail = format!(
                "{} trials at K = {GAP_HORIZON}: {bad} violations, {with_three} with three gaps, at most {most} distinct",
                trials.len()
            );
            result(7, NAME, bad as f64, 0.0, bad == 0 && trials.len() == GAP_TRIALS, detail)
        }
        Err(e) => failure(7, NAME, 0.0, e.clone()),
    }
}

/// Mean return time for the golden rotation against `2π T / eps`.
pub fn ergodic_mean() -> CriterionResult {
    const NAME: &str = "ergodic mean recurrence";
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for eps in GAP_EPSILONS {
        let stats = near_revivals(0.0, golden_rotation(), eps, GAP_HORIZON).and_then(|rec| mean_recurrence(&rec, 1.0));
        match stats {
            Ok(m) => {
                let dev = (m.empirical_mean / m.ergodic_prediction - 1.0).abs();
                worst = worst.max(dev);
                parts.push(format!("eps = {eps}: {:.6} vs {:.6}", m.empirical_mean, m.ergodic_prediction));
            }
            Err(e) => return failure(8, NAME, 0.02, e),
        }
    }
    result(8, NAME, worst, 0.02, worst < 0.02, parts.join("; "))
}

/// `C(kT) > 1 - |z|^2 eps^2` at every recurrence of every trial.
pub fn near_revival_bound(trials: &crate::Result<Vec<GapTrial>>) -> CriterionResult {
    const NAME: &str = "near-revival bound";
    match trials {
        Ok(trials) => {
            let mut violations = 0usize;
            let mut tightest = 0.0f64;
            for t in trials {
                for (z, c) in BOUND_LABELS.iter().zip(&t.min_correlation) {
                    let bound = 1.0 - z * z * t.epsilon * t.epsilon;
                    if *c <= bound {
                        violations += 1;
                    }
                    // how much of the allowed drop was used
                    tightest = tightest.max((1.0 - c) / (z * z * t.epsilon * t.epsilon));
                }
            }
            let detail = format!("{violations} violations; largest drop used {tightest:.4} of the bound");
            result(9, NAME, violations as f64, 0.0, violations == 0 && !trials.is_empty(), detail)
        }
        Err(e) => failure(9, NAME, 0.0, e.clone()),
    }
}

/// Seeded trials regenerated and compared field by field. The acceptance
/// suite also compares two complete `verify` runs byte for byte.
pub fn determinism(seed: u64, trials: &crate::Result<Vec<GapTrial>>) -> CriterionResult {
    const NAME: &str = "determinism";
    let again = gap_trials(seed);
    let same = match (trials, &again) {
        (Ok(a), Ok(b)) => serde_json::to_vec(a).ok() == serde_json::to_vec(b).ok(),
        (Err(a), Err(b)) => a == b,
        _ => false,
    };
    let detail = "seeded trials regenerated identically".to_string();
    result(
        10,
        NAME,
        if same { 0.0 } else { 1.0 },
        0.0,
        same,
        if same { detail } else { "trials differ between runs".into() },
    )
}

/// Runs criterion `id` (1..=10) on its own.
pub fn criterion(id: u32, seed: u64) -> CriterionResult {
    match id {
        1 => fractional_exactness(),
        2 => gauss_unitarity(),
        3 => kerr_revival(),
        4 => pt_spectrum(),
        5 => phase_profile(),
        6 => cancellation(),
        7 => three_gap(&gap_trials(seed)),
        8 => ergodic_mean(),
        9 => near_revival_bound(&gap_trials(seed)),
        10 => determinism(seed, &gap_trials(seed)),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all(seed: u64) -> VerifyReport {
    let trials = gap_trials(seed);
    let criteria = vec![
        fractional_exactness(),
        gauss_unitarity(),
        kerr_revival(),
        pt_spectrum(),
        phase_profile(),
        cancellation(),
        three_gap(&trials),
        ergodic_mean(),
        near_revival_bound(&trials),
        determinism(seed, &trials),
    ];
    let passed = criteria.iter().filter(|c| c.passed).count();
    VerifyReport { seed, failed: criteria.len() - passed, passed, criteria }
}
