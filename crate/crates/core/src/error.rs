use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// The command-line front end maps [`Error::Config`] and argument errors to
/// exit code 2 and everything else to exit code 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level {n} is out of range (n_max = {n_max})")]
    LevelOutOfRange { n: usize, n_max: usize },

    #[error("no bound states: eta = {eta} must exceed 1")]
    NoBoundStates { eta: f64 },

    #[error("level cap too small: discarded tail mass {tail_mass:.3e} exceeds 0.05")]
    CapTooSmall { tail_mass: f64 },

    #[error("degenerate spectrum: c1 and c2 are both zero")]
    DegenerateSpectrum,

    #[error("r = {r} and s = {s} are not coprime")]
    NotCoprime { r: u64, s: u64 },

    #[error("spectrum is linear (c2 = 0); no fractional revivals")]
    LinearSpectrum,

    #[error("grid too coarse: found {found} bound states, expected {expected}")]
    GridTooCoarse { found: usize, expected: usize },

    #[error("level {n} disappears on the loop (only {available} levels at eta = {eta})")]
    LevelDisappears { n: usize, available: usize, eta: f64 },

    #[error("need at least {needed} levels for a quadratic fit, got {got}")]
    InsufficientLevels { needed: usize, got: usize },

    #[error("trajectory does not cover [0, {period}]: spans [{start}, {end}]")]
    TrajectoryGap { start: f64, end: f64, period: f64 },

    #[error("need at least two recurrences, got {got}")]
    InsufficientRecurrences { got: usize },

    #[error("invalid parameter loop: {0}")]
    InvalidLoop(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("numerical contract violated: {0}")]
    Contract(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Whether this error came from bad user input rather than from the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::InvalidArgument(_)
                | Error::InvalidLoop(_)
                | Error::NotCoprime { .. }
                | Error::DegenerateSpectrum
                | Error::NoBoundStates { .. }
                | Error::LinearSpectrum
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
