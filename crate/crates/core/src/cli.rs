//! Subcommand drivers shared by the `revivals` binary and the examples.
//!
//! Every command turns a [`RunConfig`] into output bytes; nothing here reads
//! the clock or the environment, so equal configs give equal bytes.
//!
//! CSV numbers are written as `{:.16e}` (17 significant digits). JSON numbers
//! use the shortest representation that round-trips to the same double.
//!
//! JSON keys:
//! - `fractional`: `r, s, l, t_star, global_phase, weight_norm, components[{p, re_a, im_a, theta}], residual, classification`
//! - `berry`: `levels, gammas, theta{theta0, theta1, theta2, fit_residual}, quadratic_rel_residual, nu{nu, raw, period}, nu2_residual, stokes{lhs, rhs}, tuned, period`
//! - `threegap`: `nu1, nu2, epsilon, horizon, period, recurrences, distinct_gaps, frequencies, three_gap_ok, empirical_mean, ergodic_prediction, relative_deviation, period_within_horizon, fractional_events{...}, trials[...]`

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::berry::{self, fit_phase_profile, stokes_check, FTable, PhaseProfile, StokesSides};
use crate::config::{NuSource, RunConfig};
use crate::error::{Error, Result};
use crate::evolution::{autocorrelation_scan, classify_revivals, evolve, linear_grid, RevivalClassification};
use crate::fractional::{decompose, verify_decomposition, Component};
use crate::packets::WavePacket;
use crate::phase::{mul_mod_tau, wrap};
use crate::recurrence::{self, gap_statistics, mean_recurrence, near_revivals, GapTrial};
use crate::strobe::{self, fractional_events, strobe_evolve, NuCoefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Scan,
    Fractional,
    Berry,
    Strobe,
    Threegap,
    Verify,
}

/// Bytes to write plus whether the run met all of its own checks (only
/// `verify` can produce a report that is written but failed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub bytes: Vec<u8>,
    pub ok: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_NUMERICAL
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Output> {
    let ok = |bytes: Vec<u8>| Ok(Output { bytes, ok: true });
    match cmd {
        Command::Scan => ok(cmd_scan(cfg)?.into_bytes()),
        Command::Fractional => ok(to_json(&cmd_fractional(cfg)?)),
        Command::Berry => ok(to_json(&cmd_berry(cfg)?)),
        Command::Strobe => ok(cmd_strobe(cfg)?.into_bytes()),
        Command::Threegap => ok(to_json(&cmd_threegap(cfg)?)),
        Command::Verify => {
            let report = crate::verify::run_all(cfg.seed);
            Ok(Output { ok: report.all_passed(), bytes: to_json(&report) })
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

/// 17 significant digits.
pub fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn check_norm(psi: &WavePacket, tol: f64, what: &str) -> Result<()> {
    let drift = (psi.norm() - 1.0).abs();
    if drift > tol {
        return Err(Error::Contract(format!("{what}: norm drift {drift:e} exceeds {tol:e}")));
    }
    Ok(())
}

/// `t,correlation` over the configured time grid.
pub fn cmd_scan(cfg: &RunConfig) -> Result<String> {
    let sc = &cfg.scan;
    if sc.points == 0 || !(sc.t_max > sc.t_min) || !sc.t_min.is_finite() || !sc.t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "scan grid is empty: [{}, {}] with {} intervals",
            sc.t_min, sc.t_max, sc.points
        )));
    }
    let spec = cfg.spectrum.build()?;
    let psi = cfg.packet.build(&spec, cfg.tolerances.tail_tol)?;
    check_norm(&psi, cfg.tolerances.norm_tol, "initial packet")?;
    check_norm(&evolve(&psi, &spec, sc.t_max)?, cfg.tolerances.norm_tol, "evolved packet")?;
    let series = autocorrelation_scan(&psi, &spec, &linear_grid(sc.t_min, sc.t_max, sc.points))?;
    let mut out = String::from("t,correlation\n");
    for (t, c) in series {
        writeln!(out, "{},{}", csv_num(t), csv_num(c)).unwrap();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionalReport {
    pub r: u64,
    pub s: u64,
    pub l: u64,
    pub t_star: f64,
    pub global_phase: f64,
    pub weight_norm: f64,
    pub components: Vec<Component>,
    /// `|| cat - U(t*) psi ||_2`; coherent packets only.
    pub residual: Option<f64>,
    pub classification: RevivalClassification,
}

pub fn cmd_fractional(cfg: &RunConfig) -> Result<FractionalReport> {
    let (r, s) = (cfg.fractional.r, cfg.fractional.s);
    let spec = cfg.spectrum.build()?;
    let dec = decompose(r, s, &spec)?;
    let weight_norm = dec.weight_norm();
    if (weight_norm - 1.0).abs() > cfg.tolerances.norm_tol {
        return Err(Error::Contract(format!("Gauss weights sum to {weight_norm}")));
    }
    let residual = match cfg.packet.label() {
        Some(z) => {
            let res = verify_decomposition(z, r, s, &spec, cfg.tolerances.tail_tol)?;
            if res > cfg.tolerances.residual_tol {
                return Err(Error::Contract(format!("cat residual {res:e} exceeds {:e}", cfg.tolerances.residual_tol)));
            }
            Some(res)
        }
        None => None,
    };
    Ok(FractionalReport {
        r,
        s,
        l: dec.l,
        t_star: dec.t_star,
        global_phase: dec.global_phase,
        weight_norm,
        components: dec.components(),
        residual,
        classification: classify_revivals(&spec, cfg.tolerances.rat_tol, cfg.tolerances.s_max)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerryReport {
    pub levels: usize,
    pub gammas: Vec<f64>,
    pub theta: PhaseProfile,
    /// Fit residual over the largest `|gamma_n|` (0 when all phases vanish).
    pub quadratic_rel_residual: f64,
    pub nu: NuCoefficients,
    /// Unreduced `nu2`; zero when the `n^2` phase cancels.
    pub nu2_residual: f64,
    pub stokes: StokesSides,
    pub tuned: bool,
    pub period: f64,
}

/// Berry phases of `[loop]`, their quadratic profile and the resulting
/// stroboscopic coefficients.
pub fn cmd_berry(cfg: &RunConfig) -> Result<BerryReport> {
    let hbar = cfg.spectrum.hbar();
    let lp = cfg.parameter_loop.build()?;
    let levels = cfg.berry.levels.unwrap_or_else(|| berry::common_levels(&lp, hbar));
    let table = FTable::for_loop(&lp, levels, hbar, &cfg.berry.grid, cfg.berry.nodes)?;
    let mut gammas = (0..levels).map(|n| berry::berry_phase(n, &lp, &table)).collect::<Result<Vec<f64>>>()?;
    let indexed = |g: &[f64]| g.iter().copied().enumerate().collect::<Vec<_>>();
    let mut profile = fit_phase_profile(&indexed(&gammas))?;
    let mut lp = lp;
    if cfg.berry.tune {
        let reversed = profile.theta2 > 0.0;
        let (tuned, p) = berry::tune_period(&lp, &profile, hbar)?;
        if reversed {
            gammas.iter_mut().for_each(|g| *g = -*g);
        }
        lp = tuned;
        profile = p;
    }
    let scale = gammas.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let traj = lp.coefficient_trajectories(hbar)?;
    let nu = strobe::nu_from(&profile, &traj, hbar, lp.period())?;
    Ok(BerryReport {
        levels,
        quadratic_rel_residual: if scale > 0.0 { profile.fit_residual / scale } else { 0.0 },
        gammas,
        theta: profile,
        nu2_residual: nu.raw[2],
        nu,
        stokes: stokes_check(&lp, hbar),
        tuned: cfg.berry.tune,
        period: lp.period(),
    })
}

fn nu_coefficients(cfg: &RunConfig) -> Result<NuCoefficients> {
    match cfg.strobe.source {
        NuSource::Explicit => {
            let s = &cfg.strobe;
            if ![s.nu0, s.nu1, s.nu2].iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidArgument("strobe nu coefficients must be finite".into()));
            }
            Ok(NuCoefficients::new([s.nu0, s.nu1, s.nu2], cfg.recurrence.period))
        }
        NuSource::Loop => Ok(cmd_berry(cfg)?.nu),
    }
}

/// Rotation angle of the packet centroid after `k` steps.
fn centroid_phase(label: Option<Complex64>, nu1: f64, k: u64) -> f64 {
    match label {
        Some(z) => strobe::label_phase(z, nu1, k),
        None => mul_mod_tau(k as f64, nu1),
    }
}

/// `k,correlation,theta_k` for `k = 0..=steps`.
pub fn cmd_strobe(cfg: &RunConfig) -> Result<String> {
    let nu = nu_coefficients(cfg)?;
    let spec = cfg.spectrum.build()?;
    let psi = cfg.packet.build(&spec, cfg.tolerances.tail_tol)?;
    check_norm(&strobe_evolve(&psi, &nu, cfg.strobe.steps), cfg.tolerances.norm_tol, "strobed packet")?;
    let label = cfg.packet.label();
    let rows: Vec<(u64, f64, f64)> = (0..=cfg.strobe.steps)
        .into_par_iter()
        .map(|k| {
            let c = crate::packets::correlation(&psi, &strobe_evolve(&psi, &nu, k));
            (k, c, centroid_phase(label, nu.nu1(), k))
        })
        .collect();
    let mut out = String::from("k,correlation,theta_k\n");
    for (k, c, th) in rows {
        writeln!(out, "{k},{},{}", csv_num(c), csv_num(th)).unwrap();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionalEvents {
    pub horizon: u64,
    pub s_max: u64,
    pub threshold: f64,
    pub count: usize,
    /// First few steps at which a cat overlap exceeds the threshold.
    pub first: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeGapReport {
    pub nu1: f64,
    pub nu2: f64,
    pub epsilon: f64,
    pub horizon: u64,
    pub period: f64,
    pub recurrences: usize,
    pub distinct_gaps: Vec<u64>,
    pub frequencies: Vec<usize>,
    pub three_gap_ok: bool,
    pub empirical_mean: f64,
    pub ergodic_prediction: f64,
    pub relative_deviation: f64,
    pub period_within_horizon: Option<u64>,
    pub fractional_events: FractionalEvents,
    pub trials: Vec<GapTrial>,
}

pub fn cmd_threegap(cfg: &RunConfig) -> Result<ThreeGapReport> {
    let rc = &cfg.recurrence;
    if !(rc.period > 0.0) {
        return Err(Error::InvalidArgument(format!("recurrence.period must be positive, got {}", rc.period)));
    }
    let nu = nu_coefficients(cfg)?;
    let rec = near_revivals(rc.theta0, nu.nu1(), rc.epsilon, rc.horizon)?;
    let stats = gap_statistics(&rec)?;
    let mean = mean_recurrence(&rec, rc.period)?;

    let spec = cfg.spectrum.build()?;
    let psi = cfg.packet.build(&spec, cfg.tolerances.tail_tol)?;
    let pops = psi.populations();
    let s = &cfg.strobe;
    let events = fractional_events(&pops, &nu, s.steps, s.s_max, s.cat_threshold);

    let z_mod = cfg.packet.label().map(|z| z.norm()).into_iter().collect::<Vec<_>>();
    let trials = if rc.trials > 0 {
        recurrence::three_gap_trials(cfg.seed, rc.trials, rc.horizon, &rc.trial_epsilons, &z_mod)?
    } else {
        Vec::new()
    };

    Ok(ThreeGapReport {
        nu1: nu.nu1(),
        nu2: nu.nu2(),
        epsilon: rc.epsilon,
        horizon: rc.horizon,
        period: rc.period,
        recurrences: rec.indices.len(),
        distinct_gaps: stats.distinct_gaps,
        frequencies: stats.frequencies,
        three_gap_ok: stats.three_gap_ok,
        empirical_mean: mean.empirical_mean,
        ergodic_prediction: mean.ergodic_prediction,
        relative_deviation: mean.empirical_mean / mean.ergodic_prediction - 1.0,
        period_within_horizon: recurrence::periodic_within(wrap(nu.nu1()), rc.horizon),
        fractional_events: FractionalEvents {
            horizon: s.steps,
            s_max: s.s_max,
            threshold: s.cat_threshold,
            count: events.len(),
            first: events.iter().take(16).copied().collect(),
        },
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::load(text, &[]).unwrap()
    }

    #[test]
    fn scan_finds_kerr_revivals() {
        let c = cfg("[scan]\npoints = 4096\n");
        let csv = cmd_scan(&c).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,correlation"));
        let rows: Vec<(f64, f64)> = lines
            .map(|l| {
                let (t, v) = l.split_once(',').unwrap();
                (t.parse().unwrap(), v.parse().unwrap())
            })
            .collect();
        assert_eq!(rows.len(), 4097);
        let peaks = crate::evolution::revival_peaks(&rows, 1.0 - 1e-9);
        assert_eq!(peaks.len(), 3);
        assert!((peaks[1] - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn empty_grid_is_a_config_error() {
        let err = cmd_scan(&cfg("[scan]\npoints = 0\n")).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_CONFIG);
        let err = cmd_scan(&cfg("[scan]\nt_min = 1.0\nt_max = 1.0\n")).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_CONFIG);
    }

    #[test]
    fn fractional_reports() {
        let rep = cmd_fractional(&cfg("")).unwrap();
        assert_eq!(rep.components.len(), 2);
        assert!(rep.residual.unwrap() < 1e-9);

        let rep = cmd_fractional(&cfg("[fractional]\nr = 1\ns = 3\n")).unwrap();
        assert!(rep.components.len() <= 3);

        let err = cmd_fractional(&cfg("[fractional]\nr = 2\ns = 4\n")).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_CONFIG);
    }

    #[test]
    fn b_free_loop_gives_zero_profile() {
        let rep = cmd_berry(&cfg("[loop]\nkind = \"rectangle\"\na = [0.6, 0.8]\nb = [0.0, 0.0]\nc = 6.0\n")).unwrap();
        assert_eq!(rep.levels, 3);
        assert!(rep.gammas.iter().all(|&g| g == 0.0));
        assert_eq!(rep.theta.coefficients(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn open_loop_is_a_config_error() {
        let text = "[loop]\nkind = \"samples\"\nperiod = 1.0\n\
                    t = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.92, 0.94, 0.96, 0.97, 0.98, 0.99, 1.0]\n\
                    a = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]\n\
                    b = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.92, 0.94, 0.96, 0.97, 0.98, 0.99, 1.0]\n\
                    c = [6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 6.0]\n";
        let err = cmd_berry(&cfg(text)).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_CONFIG);
    }

    #[test]
    fn strobe_rational_rotation_revives() {
        let c = cfg(&format!("[strobe]\nnu1 = {}\nsteps = 20\n", std::f64::consts::TAU / 5.0));
        let csv = cmd_strobe(&c).unwrap();
        for line in csv.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let k: u64 = f[0].parse().unwrap();
            let corr: f64 = f[1].parse().unwrap();
            if k.is_multiple_of(5) {
                assert!((corr - 1.0).abs() < 1e-12, "k={k} C={corr}");
            } else {
                assert!(corr < 0.5);
            }
        }
    }

    #[test]
    fn threegap_untuned_flags_cats() {
        let tuned = cmd_threegap(&cfg("[recurrence]\nhorizon = 20000\n")).unwrap();
        assert!(tuned.three_gap_ok && tuned.distinct_gaps.len() <= 3);
        assert_eq!(tuned.fractional_events.count, 0);
        assert!(tuned.relative_deviation.abs() < 0.05);

        let untuned =
            cmd_threegap(&cfg("[recurrence]\nhorizon = 20000\n[strobe]\nnu2 = 1.5707963267948966\n")).unwrap();
        assert!(untuned.fractional_events.count > 0);
        assert_eq!(untuned.fractional_events.first[0], 1);
    }
}
