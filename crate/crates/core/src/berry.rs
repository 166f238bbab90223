//! Geometric phases for the Pöschl-Teller family.
//!
//! `H = W H' W†` with `H' = A p^2 - C sech^2 x` and
//! `W = exp[-(i B / (A hbar)) ln cosh x]`. Under a closed loop in `(A, B, C)`
//! the eigenstate `|phi_n> = W |chi_n>` picks up
//!
//! ```text
//! gamma_n = (1/hbar) ∮ <F>_n d(B/A),   <F>_n = ∫ ln cosh(x) chi_n(x)^2 dx
//! ```
//!
//! The `chi_n` come from a finite-difference diagonalization of `H'`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{eta, level_cap, PoschlTellerParams};
use crate::tridiag::SymTridiagonal;

/// Uniform position grid `x_min + i dx`, `i = 0..points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { x_min: -20.0, x_max: 20.0, points: 2048 }
    }
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > 0.0) || (self.x_min + self.x_max).abs() > 1e-12 * self.x_max {
            return Err(Error::InvalidArgument(format!(
                "grid must be symmetric with x_max = -x_min > 0 (got [{}, {}])",
                self.x_min, self.x_max
            )));
        }
        if self.points < 256 {
            return Err(Error::InvalidArgument(format!("grid needs at least 256 points, got {}", self.points)));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    /// Same interval with half the spacing.
    pub fn refined(&self) -> Grid {
        Grid { points: 2 * self.points - 1, ..*self }
    }
}

/// Bound states of the discretized `A p^2 - C sech^2 x`.
#[derive(Debug, Clone)]
pub struct PtEigen {
    pub grid: Grid,
    pub energies: Vec<f64>,
    /// `eigenfunctions[n][i] = chi_n(x_i)`, with `sum_i chi_n^2 dx = 1`.
    pub eigenfunctions: Vec<Vec<f64>>,
}

/// Finite-difference diagonalization of `A p^2 - C sech^2 x`.
///
/// Three-point second differences with reflecting (zero-flux) walls at the
/// grid ends. Walls of this kind leave a threshold state (`E = 0` exactly, as
/// happens when `eta` is an odd integer) just below zero instead of pushing it
/// into the box continuum, so the bound-state count matches
/// `floor((eta - 1) / 2) + 1`.
pub fn diagonalize_pt(a: f64, c: f64, hbar: f64, grid: &Grid) -> Result<PtEigen> {
    grid.validate()?;
    let expected = PoschlTellerParams::new(a, c, hbar).n_max()? + 1;
    let n = grid.points;
    let dx = grid.dx();
    let kin = a * hbar * hbar / (dx * dx);
    let mut diag: Vec<f64> = (0..n)
        .map(|i| {
            let s = 1.0 / grid.x(i).cosh();
            2.0 * kin - c * s * s
        })
        .collect();
    diag[0] -= kin;
    diag[n - 1] -= kin;
    let h = SymTridiagonal::new(diag, vec![-kin; n - 1]);

    let found = h.count_below(0.0);
    if found != expected {
        return Err(Error::GridTooCoarse { found, expected });
    }
    let norm = dx.sqrt();
    let mut energies = Vec::with_capacity(found);
    let mut eigenfunctions = Vec::with_capacity(found);
    for (e, v) in h.lowest(found) {
        let mut chi: Vec<f64> = v.into_iter().map(|x| x / norm).collect();
        fix_sign(&mut chi);
        energies.push(e);
        eigenfunctions.push(chi);
    }
    Ok(PtEigen { grid: *grid, energies, eigenfunctions })
}

/// Makes the first appreciable value from the left positive.
fn fix_sign(chi: &mut [f64]) {
    let peak = chi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = chi.iter().find(|v| v.abs() > 1e-6 * peak) {
        if *first < 0.0 {
            chi.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// `ln cosh x` without overflow.
pub fn ln_cosh(x: f64) -> f64 {
    let ax = x.abs();
    ax + (-2.0 * ax).exp().ln_1p() - std::f64::consts::LN_2
}

impl PtEigen {
    /// `<F>_n = sum_i ln cosh(x_i) chi_n(x_i)^2 dx`.
    pub fn f_expectation(&self, n: usize) -> Result<f64> {
        let chi = self
            .eigenfunctions
            .get(n)
            .ok_or(Error::LevelOutOfRange { n, n_max: self.eigenfunctions.len().saturating_sub(1) })?;
        let dx = self.grid.dx();
        Ok(chi.iter().enumerate().map(|(i, v)| ln_cosh(self.grid.x(i)) * v * v).sum::<f64>() * dx)
    }
}

pub fn f_expectation(n: usize, a: f64, c: f64, hbar: f64, grid: &Grid) -> Result<f64> {
    let max = PoschlTellerParams::new(a, c, hbar).n_max()?;
    if n > max {
        return Err(Error::LevelOutOfRange { n, n_max: max });
    }
    diagonalize_pt(a, c, hbar, grid)?.f_expectation(n)
}

/// One sample of a parameter loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopPoint {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Closed path `R(t) = (A, B, C)` traversed once over `[0, period]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterLoop {
    samples: Vec<LoopPoint>,
    period: f64,
}

pub const MIN_LOOP_SAMPLES: usize = 16;

impl ParameterLoop {
    pub fn new(samples: Vec<LoopPoint>, period: f64) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidLoop(format!("period must be positive, got {period}")));
        }
        if samples.len() < MIN_LOOP_SAMPLES {
            return Err(Error::InvalidLoop(format!("need at least {MIN_LOOP_SAMPLES} samples, got {}", samples.len())));
        }
        let (first, last) = (samples[0], samples[samples.len() - 1]);
        let gap = (first.a - last.a).abs().max((first.b - last.b).abs()).max((first.c - last.c).abs());
        if gap > 1e-12 {
            return Err(Error::InvalidLoop(format!("loop is not closed (endpoint gap {gap:.3e})")));
        }
        if let Some(p) = samples.iter().find(|p| !(p.a > 0.0 && p.c > 0.0)) {
            return Err(Error::InvalidLoop(format!("A and C must stay positive (A = {}, C = {})", p.a, p.c)));
        }
        if samples.windows(2).any(|w| !(w[1].t >= w[0].t)) {
            return Err(Error::InvalidLoop("timestamps must be non-decreasing".into()));
        }
        let tol = 1e-9 * period;
        if first.t.abs() > tol || (last.t - period).abs() > tol {
            return Err(Error::InvalidLoop(format!(
                "timestamps must span [0, {period}] (got [{}, {}])",
                first.t, last.t
            )));
        }
        Ok(Self { samples, period })
    }

    /// Counter-clockwise rectangle in the `(A, B)` plane at fixed `C`, with
    /// `per_edge` intervals on each side and uniform time per interval.
    pub fn rectangle(a: (f64, f64), b: (f64, f64), c: f64, per_edge: usize, period: f64) -> Result<Self> {
        let corners = [(a.0, b.0), (a.1, b.0), (a.1, b.1), (a.0, b.1), (a.0, b.0)];
        let total = 4 * per_edge.max(1);
        let mut samples = Vec::with_capacity(total + 1);
        for edge in corners.windows(2) {
            let ((a0, b0), (a1, b1)) = (edge[0], edge[1]);
            for j in 0..per_edge.max(1) {
                let s = j as f64 / per_edge.max(1) as f64;
                samples.push((a0 + (a1 - a0) * s, b0 + (b1 - b0) * s));
            }
        }
        samples.push(corners[0]);
        let pts = samples
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| LoopPoint { t: period * i as f64 / total as f64, a, b, c })
            .collect();
        Self::new(pts, period)
    }

    /// Ellipse `A = a0 + ra cos(2 pi t/T)`, `B = b0 + rb sin(2 pi t/T)` at fixed `C`.
    pub fn ellipse(center: (f64, f64), radii: (f64, f64), c: f64, samples: usize, period: f64) -> Result<Self> {
        let m = samples.max(1);
        let pts = (0..=m)
            .map(|i| {
                let phase = TAU * (i % m) as f64 / m as f64;
                LoopPoint {
                    t: period * i as f64 / m as f64,
                    a: center.0 + radii.0 * phase.cos(),
                    b: center.1 + radii.1 * phase.sin(),
                    c,
                }
            })
            .collect();
        Self::new(pts, period)
    }

    pub fn samples(&self) -> &[LoopPoint] {
        &self.samples
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Same path traversed backwards.
    pub fn reversed(&self) -> Self {
        let samples = self.samples.iter().rev().map(|p| LoopPoint { t: self.period - p.t, ..*p }).collect();
        Self { samples, period: self.period }
    }

    /// Same path with every timestamp scaled to a new period.
    pub fn with_period(&self, period: f64) -> Result<Self> {
        let k = period / self.period;
        let samples = self.samples.iter().map(|p| LoopPoint { t: p.t * k, ..*p }).collect();
        Self::new(samples, period)
    }

    /// Ranges of `A` and `C` visited.
    pub fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        let fold = |f: fn(&LoopPoint) -> f64| {
            self.samples.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        (fold(|p| p.a), fold(|p| p.c))
    }

    /// Trapezoidal `∮ f(A, C) d(B/A)` over the samples.
    pub fn line_integral(&self, f: impl Fn(&LoopPoint) -> f64) -> f64 {
        let vals: Vec<f64> = self.samples.iter().map(&f).collect();
        self.samples
            .windows(2)
            .zip(vals.windows(2))
            .map(|(p, v)| 0.5 * (v[0] + v[1]) * (p[1].b / p[1].a - p[0].b / p[0].a))
            .sum()
    }

    /// Trapezoidal `∫_0^T g(R(t)) dt`.
    pub fn time_integral(&self, g: impl Fn(&LoopPoint) -> f64) -> f64 {
        self.samples.windows(2).map(|p| 0.5 * (g(&p[0]) + g(&p[1])) * (p[1].t - p[0].t)).sum()
    }

    /// `(t, c_i(t))` trajectories of the Pöschl-Teller quadratic coefficients.
    pub fn coefficient_trajectories(&self, hbar: f64) -> Result<[Vec<(f64, f64)>; 3]> {
        let mut out: [Vec<(f64, f64)>; 3] = Default::default();
        for p in &self.samples {
            let q = PoschlTellerParams::new(p.a, p.c, hbar).quadratic()?;
            out[0].push((p.t, q.c0));
            out[1].push((p.t, q.c1));
            out[2].push((p.t, q.c2));
        }
        Ok(out)
    }
}

/// Lattice of `<F>_n(A, C)` values with bilinear interpolation.
///
/// Filled once at construction; lattice nodes are diagonalized in parallel.
#[derive(Debug, Clone)]
pub struct FTable {
    a_axis: Vec<f64>,
    c_axis: Vec<f64>,
    levels: usize,
    hbar: f64,
    grid: Grid,
    /// `values[(ia * c_axis.len() + ic) * levels + n]`
    values: Vec<f64>,
}

fn axis(lo: f64, hi: f64, nodes: usize) -> Vec<f64> {
    if hi - lo <= 1e-14 * hi.abs().max(1.0) || nodes < 2 {
        return vec![lo];
    }
    (0..nodes).map(|i| lo + (hi - lo) * i as f64 / (nodes - 1) as f64).collect()
}

fn bracket(axis: &[f64], v: f64) -> (usize, f64) {
    if axis.len() == 1 {
        return (0, 0.0);
    }
    let h = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    let pos = ((v - axis[0]) / h).clamp(0.0, (axis.len() - 1) as f64);
    let i = (pos.floor() as usize).min(axis.len() - 2);
    (i, pos - i as f64)
}

impl FTable {
    /// Tabulates levels `0..levels` over `[a_lo, a_hi] x [c_lo, c_hi]`.
    pub fn build(
        a_range: (f64, f64),
        c_range: (f64, f64),
        nodes: (usize, usize),
        levels: usize,
        hbar: f64,
        grid: &Grid,
    ) -> Result<Self> {
        let a_axis = axis(a_range.0, a_range.1, nodes.0);
        let c_axis = axis(c_range.0, c_range.1, nodes.1);
        let keys: Vec<(f64, f64)> = a_axis.iter().flat_map(|&a| c_axis.iter().map(move |&c| (a, c))).collect();
        let rows: Vec<Result<Vec<f64>>> = keys
            .par_iter()
            .map(|&(a, c)| {
                let eig = diagonalize_pt(a, c, hbar, grid)?;
                if eig.energies.len() < levels {
                    return Err(Error::LevelDisappears {
                        n: levels - 1,
                        available: eig.energies.len(),
                        eta: eta(a, c, hbar),
                    });
                }
                (0..levels).map(|n| eig.f_expectation(n)).collect()
            })
            .collect();
        let mut values = Vec::with_capacity(keys.len() * levels);
        for row in rows {
            values.extend(row?);
        }
        Ok(Self { a_axis, c_axis, levels, hbar, grid: *grid, values })
    }

    /// Table covering a loop, with `nodes` lattice points per varying axis.
    pub fn for_loop(lp: &ParameterLoop, levels: usize, hbar: f64, grid: &Grid, nodes: usize) -> Result<Self> {
        for p in lp.samples() {
            let cap = level_cap(eta(p.a, p.c, hbar));
            if levels > cap + 1 {
                return Err(Error::LevelDisappears { n: levels - 1, available: cap + 1, eta: eta(p.a, p.c, hbar) });
            }
        }
        let (a, c) = lp.ranges();
        Self::build(a, c, (nodes, nodes), levels, hbar, grid)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    fn node(&self, ia: usize, ic: usize, n: usize) -> f64 {
        self.values[(ia * self.c_axis.len() + ic) * self.levels + n]
    }

    /// Bilinear interpolation of `<F>_n` at `(a, c)`.
    pub fn get(&self, n: usize, a: f64, c: f64) -> f64 {
        let (ia, fa) = bracket(&self.a_axis, a);
        let (ic, fc) = bracket(&self.c_axis, c);
        let ia1 = (ia + 1).min(self.a_axis.len() - 1);
        let ic1 = (ic + 1).min(self.c_axis.len() - 1);
        let v00 = self.node(ia, ic, n);
        let v10 = self.node(ia1, ic, n);
        let v01 = self.node(ia, ic1, n);
        let v11 = self.node(ia1, ic1, n);
        (1.0 - fa) * ((1.0 - fc) * v00 + fc * v01) + fa * ((1.0 - fc) * v10 + fc * v11)
    }

    /// Largest interpolation error at cell midpoints against direct
    /// diagonalization, over all levels.
    pub fn midpoint_error(&self) -> Result<f64> {
        let mid = |axis: &[f64]| -> Vec<f64> {
            if axis.len() == 1 {
                axis.to_vec()
            } else {
                axis.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
            }
        };
        let probes: Vec<(f64, f64)> =
            mid(&self.a_axis).into_iter().flat_map(|a| mid(&self.c_axis).into_iter().map(move |c| (a, c))).collect();
        let errs: Vec<Result<f64>> = probes
            .par_iter()
            .map(|&(a, c)| {
                let eig = diagonalize_pt(a, c, self.hbar, &self.grid)?;
                let mut worst = 0.0f64;
                for n in 0..self.levels {
                    worst = worst.max((eig.f_expectation(n)? - self.get(n, a, c)).abs());
                }
                Ok(worst)
            })
            .collect();
        errs.into_iter().try_fold(0.0f64, |m, e| Ok(m.max(e?)))
    }
}

/// `gamma_n = (1/hbar) ∮ <F>_n d(B/A)` with `<F>_n` read from `table`.
pub fn berry_phase(n: usize, lp: &ParameterLoop, table: &FTable) -> Result<f64> {
    if n >= table.levels() {
        return Err(Error::LevelOutOfRange { n, n_max: table.levels().saturating_sub(1) });
    }
    for p in lp.samples() {
        let available = level_cap(eta(p.a, p.c, table.hbar())) + 1;
        if n >= available {
            return Err(Error::LevelDisappears { n, available, eta: eta(p.a, p.c, table.hbar()) });
        }
    }
    Ok(lp.line_integral(|p| table.get(n, p.a, p.c)) / table.hbar())
}

/// `gamma_n` for `n = 0..levels`, building the `<F>` table on the way.
pub fn berry_phases(lp: &ParameterLoop, levels: usize, hbar: f64, grid: &Grid, nodes: usize) -> Result<Vec<f64>> {
    let table = FTable::for_loop(lp, levels, hbar, grid, nodes)?;
    (0..levels).map(|n| berry_phase(n, lp, &table)).collect()
}

/// Number of levels bound everywhere on the loop.
pub fn common_levels(lp: &ParameterLoop, hbar: f64) -> usize {
    lp.samples().iter().map(|p| level_cap(eta(p.a, p.c, hbar)) + 1).min().unwrap_or(0)
}

/// Quadratic fit `gamma_n ≈ theta0 + theta1 n + theta2 n^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// Largest absolute deviation of the data from the fit.
    pub fit_residual: f64,
}

impl PhaseProfile {
    pub fn exact(theta0: f64, theta1: f64, theta2: f64) -> Self {
        Self { theta0, theta1, theta2, fit_residual: 0.0 }
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.theta0, self.theta1, self.theta2]
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.theta0 + self.theta1 * n + self.theta2 * n * n
    }

    /// Whether the quadratic form describes the data to `rel_tol` of the
    /// largest phase.
    pub fn is_quadratic(&self, gammas: &[(usize, f64)], rel_tol: f64) -> bool {
        let scale = gammas.iter().fold(0.0f64, |m, g| m.max(g.1.abs()));
        self.fit_residual <= rel_tol * scale
    }
}

/// Least-squares quadratic through `(n, gamma_n)`; exact interpolation for
/// three levels.
pub fn fit_phase_profile(gammas: &[(usize, f64)]) -> Result<PhaseProfile> {
    let mut levels: Vec<usize> = gammas.iter().map(|g| g.0).collect();
    levels.sort_unstable();
    levels.dedup();
    if levels.len() < 3 {
        return Err(Error::InsufficientLevels { needed: 3, got: levels.len() });
    }
    let m = gammas.len();
    let design = DMatrix::from_fn(m, 3, |i, j| (gammas[i].0 as f64).powi(j as i32));
    let rhs = DVector::from_iterator(m, gammas.iter().map(|g| g.1));
    let svd = design.svd(true, true);
    let sol = svd.solve(&rhs, 1e-14).map_err(|e| Error::Contract(format!("quadratic fit failed: {e}")))?;
    let mut profile = PhaseProfile { theta0: sol[0], theta1: sol[1], theta2: sol[2], fit_residual: 0.0 };
    profile.fit_residual = gammas.iter().fold(0.0f64, |m, g| m.max((profile.eval(g.0 as f64) - g.1).abs()));
    Ok(profile)
}

/// Trapezoidal `∫ y dt` over `(t, y)` samples.
pub fn trapezoid(samples: &[(f64, f64)]) -> f64 {
    samples.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum()
}

/// `nu_2 = theta2 - (1/hbar) ∫_0^T c2(t) dt`; fractional revivals are
/// cancelled when this vanishes.
pub fn cancellation_residual(profile: &PhaseProfile, c2_trajectory: &[(f64, f64)], hbar: f64) -> f64 {
    profile.theta2 - trapezoid(c2_trajectory) / hbar
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesSides {
    pub lhs: f64,
    pub rhs: f64,
}

/// Both sides of the cancellation condition in surface form:
/// `lhs = ∮ (1/eta^2) d(B/A)` (the boundary form of the surface integral of
/// `∇(1/eta^2) × ∇(B/A)`) and `rhs = hbar^2 ∫_0^T A dt`.
pub fn stokes_check(lp: &ParameterLoop, hbar: f64) -> StokesSides {
    let lhs = lp.line_integral(|p| {
        let e = eta(p.a, p.c, hbar);
        1.0 / (e * e)
    });
    let rhs = hbar * hbar * lp.time_integral(|p| p.a);
    StokesSides { lhs, rhs }
}

/// Rescales (and if necessary reverses) `lp` so that
/// `theta2 + hbar ∫_0^T A dt = 0`, i.e. so that the loop cancels the `n^2`
/// phase of the Pöschl-Teller spectrum whose `c2 = -A hbar^2`.
///
/// `profile` must be the phase profile of `lp` as given; reversing the loop
/// negates it. Returns the tuned loop and its profile.
pub fn tune_period(lp: &ParameterLoop, profile: &PhaseProfile, hbar: f64) -> Result<(ParameterLoop, PhaseProfile)> {
    if profile.theta2 == 0.0 {
        return Err(Error::InvalidLoop("loop induces no n^2 phase; nothing to tune".into()));
    }
    let (lp, profile) = if profile.theta2 > 0.0 {
        let p = PhaseProfile {
            theta0: -profile.theta0,
            theta1: -profile.theta1,
            theta2: -profile.theta2,
            fit_residual: profile.fit_residual,
        };
        (lp.reversed(), p)
    } else {
        (lp.clone(), *profile)
    };
    // ∫ A dt scales linearly with the period
    let mean_a = lp.time_integral(|p| p.a) / lp.period();
    let period = -profile.theta2 / (hbar * mean_a);
    Ok((lp.with_period(period)?, profile))
}
