use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("epsilon {0} is outside the admissible range (0, 1/2)")]
    InvalidEpsilon(f64),
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("all input points are collinear; no convex polygon exists")]
    Collinear,
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("annulus pair d = {d}, epsilon = {epsilon} violates {requirement}")]
    AnnulusHypothesis {
        d: f64,
        epsilon: f64,
        requirement: &'static str,
    },
    #[error("negative radicand {value} while computing {what}")]
    NegativeRadicand { what: &'static str, value: f64 },
    #[error("epsilon {epsilon} yields fewer than 3 boxes on a boundary of perimeter {perimeter}")]
    TooFewBoxes { epsilon: f64, perimeter: f64 },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("power iteration did not converge in {iterations} iterations (last estimate {last_estimate})")]
    NoConvergence {
        iterations: usize,
        last_estimate: f64,
    },
    #[error("certificate vector entry {index} is not strictly positive ({value})")]
    NonPositiveCertificate { index: usize, value: f64 },
    #[error("certificate vector has length {got}, graph has {expected} vertices")]
    CertificateLength { expected: usize, got: usize },
    #[error("bound chain out of order: {0}")]
    ChainOrder(String),
    #[error("no antipodal pairs: the bound holds vacuously")]
    Vacuous,
    #[error("exponent fit needs at least 3 usable points, got {0}")]
    TooFewFitPoints(usize),
    #[error("field {field} has nonpositive value {value} at epsilon {epsilon}")]
    NonPositiveValue {
        field: &'static str,
        value: f64,
        epsilon: f64,
    },
    #[error("invalid epsilon grid: {0}")]
    InvalidGrid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}
