use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{name} = {value} is outside its admissible range ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("Mittag-Leffler E_{{{alpha},{mu}}}({z}) is outside the supported evaluation window")]
    UnsupportedRange { alpha: f64, mu: f64, z: f64 },

    #[error("unsupported y-domain: {0}")]
    UnsupportedDomain(String),

    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    Shape {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("C_eps series diverges for eps = {epsilon} (need eps > 0)")]
    SeriesDivergence { epsilon: f64 },

    #[error("(f(t,x,.), omega) = {value:e} is below the guard {guard:e} at t = {t}, x = {x}")]
    DenominatorDegenerate { t: f64, x: f64, value: f64, guard: f64 },

    #[error("singular tridiagonal system in mode solve")]
    SingularSystem,

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("successive approximations diverge: ratio history {ratios:?}")]
    IterationDivergence { ratios: Vec<f64> },

    #[error("no convergence after {iterations} iterations (last weighted difference {last_w:e})")]
    NoConvergence { iterations: usize, last_w: f64 },

    #[error("solvability condition violated: {0}")]
    ConditionViolation(String),

    #[error("contraction monitor needs at least 3 iterations, got {len}")]
    InsufficientHistory { len: usize },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }

    pub(crate) fn shape(context: &'static str, expected: usize, found: usize) -> Self {
        Error::Shape {
            context,
            expected,
            found,
        }
    }
}
