use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: expected a grade-{expected} multivector")]
    GradeMismatch { op: &'static str, expected: u8 },

    #[error("invalid grade index {0} (must be 0..=3)")]
    InvalidGrade(u8),

    #[error("rotation plane is not a unit bivector (plane^2 + 1 = {deviation:e})")]
    NonUnitPlane { deviation: f64 },

    #[error("{what} must be a unit vector (|v| = {norm})")]
    NonUnitVector { what: &'static str, norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("photon pulse never reaches the absorption threshold (peak {peak} < rho0 {rho0})")]
    IncompleteAbsorption { peak: f64, rho0: f64 },

    #[error("position z = {z} lies inside the vector-potential region ending at z1 = {z1}")]
    InsideFieldRegion { z: f64, z1: f64 },

    #[error("invalid quantum numbers n = {n}, l = {l}, m = {m}")]
    InvalidQuantumNumbers { n: u32, l: u32, m: i32 },

    #[error("spherical frame undefined at r = {r}, theta = {theta}")]
    FrameSingularity { r: f64, theta: f64 },

    #[error("grid mismatch: expected {expected} points, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has zero norm")]
    ZeroNorm,

    #[error("{solver} did not converge after {iterations} iterations (last residual {residual:e})")]
    NotConverged { solver: &'static str, iterations: usize, residual: f64, history: Vec<f64> },

    #[error("problem file: {0}")]
    Problem(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
