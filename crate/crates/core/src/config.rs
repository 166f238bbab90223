//! Run configuration: one TOML file plus `key.path=value` overrides.
//!
//! Every table rejects unknown keys. Missing sections fall back to the
//! defaults below, so an empty file is a valid Kerr / coherent `z = 2` run.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::berry::{Grid, LoopPoint, ParameterLoop};
use crate::error::{Error, Result};
use crate::packets::{coherent_packet, gaussian_packet, WavePacket, DEFAULT_TAIL_TOL};
use crate::spectra::{PoschlTellerParams, QuadraticSpectrum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpectrumSpec {
    Quadratic {
        c0: f64,
        c1: f64,
        c2: f64,
        #[serde(default = "one")]
        hbar: f64,
        #[serde(default)]
        n_max: Option<usize>,
    },
    Kerr {
        #[serde(default = "one")]
        kappa: f64,
        #[serde(default = "one")]
        hbar: f64,
    },
    PoschlTeller {
        a: f64,
        c: f64,
        #[serde(default = "one")]
        hbar: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Default for SpectrumSpec {
    fn default() -> Self {
        SpectrumSpec::Kerr { kappa: 1.0, hbar: 1.0 }
    }
}

impl SpectrumSpec {
    pub fn build(&self) -> Result<QuadraticSpectrum> {
        match *self {
            SpectrumSpec::Quadratic { c0, c1, c2, hbar, n_max } => {
                let s = QuadraticSpectrum::new(c0, c1, c2, hbar)?;
                Ok(match n_max {
                    Some(n) => s.with_n_max(n),
                    None => s,
                })
            }
            SpectrumSpec::Kerr { kappa, hbar } => QuadraticSpectrum::kerr(kappa, hbar),
            SpectrumSpec::PoschlTeller { a, c, hbar } => PoschlTellerParams::new(a, c, hbar).quadratic(),
        }
    }

    pub fn hbar(&self) -> f64 {
        match *self {
            SpectrumSpec::Quadratic { hbar, .. }
            | SpectrumSpec::Kerr { hbar, .. }
            | SpectrumSpec::PoschlTeller { hbar, .. } => hbar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PacketSpec {
    Coherent {
        re: f64,
        #[serde(default)]
        im: f64,
        #[serde(default)]
        n_cap: Option<usize>,
    },
    Gaussian {
        n0: f64,
        sigma: f64,
        #[serde(default)]
        n_cap: Option<usize>,
    },
}

impl Default for PacketSpec {
    fn default() -> Self {
        PacketSpec::Coherent { re: 2.0, im: 0.0, n_cap: None }
    }
}

impl PacketSpec {
    /// Builds the packet, capped at the spectrum's top level if it has one.
    pub fn build(&self, spec: &QuadraticSpectrum, tail_tol: f64) -> Result<WavePacket> {
        let level_cap = spec.n_max;
        let cap = |own: Option<usize>| match (own, level_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        match *self {
            PacketSpec::Coherent { re, im, n_cap } => coherent_packet(Complex64::new(re, im), tail_tol, cap(n_cap)),
            PacketSpec::Gaussian { n0, sigma, n_cap } => gaussian_packet(n0, sigma, tail_tol, cap(n_cap)),
        }
    }

    pub fn label(&self) -> Option<Complex64> {
        match *self {
            PacketSpec::Coherent { re, im, .. } => Some(Complex64::new(re, im)),
            PacketSpec::Gaussian { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LoopSpec {
    Rectangle {
        a: (f64, f64),
        b: (f64, f64),
        c: f64,
        #[serde(default = "default_per_edge")]
        per_edge: usize,
        #[serde(default = "one")]
        period: f64,
    },
    Ellipse {
        center: (f64, f64),
        radii: (f64, f64),
        c: f64,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "one")]
        period: f64,
    },
    /// Explicit samples; the last row must repeat the first.
    Samples { t: Vec<f64>, a: Vec<f64>, b: Vec<f64>, c: Vec<f64>, period: f64 },
}

fn default_per_edge() -> usize {
    64
}

fn default_samples() -> usize {
    256
}

impl Default for LoopSpec {
    fn default() -> Self {
        LoopSpec::Rectangle { a: (0.6, 0.8), b: (0.0, 1.0), c: 6.0, per_edge: 64, period: 1.0 }
    }
}

impl LoopSpec {
    pub fn build(&self) -> Result<ParameterLoop> {
        match self {
            LoopSpec::Rectangle { a, b, c, per_edge, period } => {
                ParameterLoop::rectangle(*a, *b, *c, *per_edge, *period)
            }
            LoopSpec::Ellipse { center, radii, c, samples, period } => {
                ParameterLoop::ellipse(*center, *radii, *c, *samples, *period)
            }
            LoopSpec::Samples { t, a, b, c, period } => {
                let n = t.len();
                if a.len() != n || b.len() != n || c.len() != n {
                    return Err(Error::InvalidLoop("t, a, b and c must have equal length".into()));
                }
                let pts = (0..n).map(|i| LoopPoint { t: t[i], a: a[i], b: b[i], c: c[i] }).collect();
                ParameterLoop::new(pts, *period)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub t_min: f64,
    pub t_max: f64,
    /// Number of intervals; `points + 1` samples including both ends.
    pub points: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { t_min: 0.0, t_max: std::f64::consts::TAU, points: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FractionalConfig {
    pub r: u64,
    pub s: u64,
}

impl Default for FractionalConfig {
    fn default() -> Self {
        Self { r: 1, s: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerryConfig {
    /// Levels to follow; defaults to all levels bound on the whole loop.
    pub levels: Option<usize>,
    /// `<F>` lattice nodes per varying parameter.
    pub nodes: usize,
    /// Rescale the loop period so that the `n^2` phase cancels.
    pub tune: bool,
    pub grid: Grid,
}

impl Default for BerryConfig {
    fn default() -> Self {
        Self { levels: None, nodes: 9, tune: false, grid: Grid::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuSource {
    /// `nu0`, `nu1`, `nu2` as given.
    Explicit,
    /// From the Berry phases and dynamical phases of `[loop]`.
    Loop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrobeConfig {
    pub source: NuSource,
    pub nu0: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub steps: u64,
    /// Largest `s` of the `(r, s)` cats searched for fractional revivals.
    pub s_max: u64,
    pub cat_threshold: f64,
}

impl Default for StrobeConfig {
    fn default() -> Self {
        Self {
            source: NuSource::Explicit,
            nu0: 0.0,
            nu1: crate::recurrence::golden_rotation(),
            nu2: 0.0,
            steps: 1000,
            s_max: 8,
            cat_threshold: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecurrenceConfig {
    /// Arc length of the return window.
    pub epsilon: f64,
    pub horizon: u64,
    pub theta0: f64,
    /// Drive period `T`; recurrence times are reported in units of `T` and
    /// the ergodic mean as `2π T / epsilon`.
    pub period: f64,
    /// Extra seeded random `(nu1, epsilon)` trials.
    pub trials: usize,
    pub trial_epsilons: Vec<f64>,
}

impl Default for RecurrenceConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            horizon: 100_000,
            theta0: 0.0,
            period: 1.0,
            trials: 0,
            trial_epsilons: vec![0.02, 0.1, 0.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tail_tol: f64,
    /// Rationality tolerance for `c1 / c2`.
    pub rat_tol: f64,
    /// Largest denominator tried when classifying `c1 / c2`.
    pub s_max: u64,
    /// Allowed norm drift before a run is declared numerically broken.
    pub norm_tol: f64,
    /// Residual allowed between a cat state and direct evolution.
    pub residual_tol: f64,
    /// `C` above which a scan sample counts as a revival.
    pub revival_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tail_tol: DEFAULT_TAIL_TOL,
            rat_tol: 1e-12,
            s_max: 1_000_000,
            norm_tol: 1e-10,
            residual_tol: 1e-9,
            revival_threshold: 1.0 - 1e-6,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("tail_tol", self.tail_tol),
            ("rat_tol", self.rat_tol),
            ("norm_tol", self.norm_tol),
            ("residual_tol", self.residual_tol),
            ("revival_threshold", self.revival_threshold),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Config(format!("tolerances.{name} must be positive, got {v}")));
            }
        }
        if self.s_max == 0 {
            return Err(Error::Config("tolerances.s_max must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub spectrum: SpectrumSpec,
    pub packet: PacketSpec,
    #[serde(rename = "loop")]
    pub parameter_loop: LoopSpec,
    pub scan: ScanConfig,
    pub fractional: FractionalConfig,
    pub berry: BerryConfig,
    pub strobe: StrobeConfig,
    pub recurrence: RecurrenceConfig,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            spectrum: SpectrumSpec::default(),
            packet: PacketSpec::default(),
            parameter_loop: LoopSpec::default(),
            scan: ScanConfig::default(),
            fractional: FractionalConfig::default(),
            berry: BerryConfig::default(),
            strobe: StrobeConfig::default(),
            recurrence: RecurrenceConfig::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    /// Parses TOML text, applies `key.path=value` overrides, and validates.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self> {
        let mut value: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        if !overrides.is_empty() {
            // overrides into a section the file leaves out start from its defaults
            let defaults: toml::Table = toml::Table::try_from(RunConfig::default()).expect("config serializes");
            for o in overrides {
                let section = o.split(['.', '=']).next().unwrap_or("").trim();
                if o.contains('.') && !value.contains_key(section) {
                    if let Some(d) = defaults.get(section) {
                        value.insert(section.to_string(), d.clone());
                    }
                }
                apply_override(&mut value, o)?;
            }
        }
        let cfg: RunConfig =
            toml::Value::Table(value).try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.tolerances.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path, overrides: &[String]) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::load(&text, overrides)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Sets `a.b.c = value`, creating intermediate tables. The value is read as
/// a TOML literal when possible (`1e-9`, `true`, `[0.9, 1.1]`, `"kerr"`) and
/// as a bare string otherwise.
pub fn apply_override(root: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {assignment:?} is not of the form key=value")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("bad override key {key:?}")));
    }
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));

    let (last, parents) = path.split_last().expect("non-empty path");
    let mut table = root;
    for p in parents {
        let entry = table.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry.as_table_mut().ok_or_else(|| Error::Config(format!("override {key:?}: {p:?} is not a table")))?;
    }
    // switching the variant of a tagged section discards the old variant's fields
    if *last == "kind" && !parents.is_empty() && table.get("kind").is_some_and(|k| *k != value) {
        table.clear();
    }
    table.insert(last.to_string(), value);
    Ok(())
}
