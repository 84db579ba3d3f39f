use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {site} out of range for a {qubits}-qubit register")]
    SiteOutOfRange { site: usize, qubits: usize },

    #[error("operator is not hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("generator is not diagonal (max off-diagonal {deviation:e})")]
    NotDiagonal { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid device: {0}")]
    InvalidDevice(String),

    #[error("invalid drive: {0}")]
    InvalidDrive(String),

    #[error("drive must target qubit 0 only with two-quadrature driving")]
    UnsupportedDrive,

    #[error("unphysical noise: T2 = {t2:e} exceeds 2*T1 = {:e}", 2.0 * t1)]
    UnphysicalNoise { t1: f64, t2: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("no phase recurrence: Ising spectrum is incommensurate")]
    NoRecurrence,

    #[error("channel is not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid error site {site} for a {qubits}-qubit code")]
    InvalidErrorSite { site: usize, qubits: usize },

    #[error("capacitance matrix is singular")]
    SingularCapacitance,

    #[error("invalid circuit parameters: {0}")]
    InvalidCircuit(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
