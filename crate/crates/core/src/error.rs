use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate jump: |uL - uR| = {jump:e} is below the threshold {threshold:e}")]
    DegenerateJump { jump: f64, threshold: f64 },

    #[error("target {target} is outside the bracket image [{lo}, {hi}]")]
    BracketError { target: f64, lo: f64, hi: f64 },

    #[error("invalid profile: {0}")]
    SpecError(String),

    #[error("non-finite value in {what} at x = {x}")]
    NonFiniteError { what: String, x: f64 },

    #[error("quadrature on [{a}, {b}] did not reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureError { a: f64, b: f64, tol: f64, estimate: f64 },

    #[error("parameter s = {s} is a jump breakpoint")]
    JumpParameterError { s: f64 },

    #[error("parameter {value} outside range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("curve is not an S-curve at X = {x}: {reason}")]
    NotSCurve { x: f64, reason: String },

    #[error("signed area has no sign change over [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("weak-solution projection is inconsistent: {0}")]
    ProjectionInconsistent(String),

    #[error("no root of the shock polynomial in ({lo}, {hi})")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("shock polynomial has {count} roots in ({lo}, {hi})")]
    MultipleRoots { count: usize, lo: f64, hi: f64 },

    #[error("coincident interpolation abscissae at x = {0}")]
    CoincidentAbscissae(f64),

    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("unsupported data: {0}")]
    UnsupportedData(String),

    #[error("CFL/grid violation: {0}")]
    CflViolation(String),

    #[error("no oracle available: {0}")]
    NoOracle(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn at_time(self, t: f64) -> Self {
        match self {
            e @ Error::AtTime { .. } => e,
            e => Error::AtTime { t, source: Box::new(e) },
        }
    }

    /// The innermost error, with time context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtTime { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self.root(), Error::Config(_) | Error::SpecError(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
