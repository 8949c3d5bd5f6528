use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(
        "lattice of {num_sites} sites with local dimension {local_dim} exceeds 2^31 basis states"
    )]
    HilbertSpaceTooLarge { num_sites: usize, local_dim: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("digit {digit} at site {site} is not below local dimension {local_dim}")]
    DigitOutOfRange {
        site: usize,
        digit: usize,
        local_dim: usize,
    },

    #[error("ditstring has {got} digits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),

    #[error("Hamiltonian is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no discontinuity found")]
    NoDiscontinuity,

    #[error("invalid probability table: {0}")]
    InvalidProbabilities(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("every probability was filtered out")]
    EmptyTable,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("counts file line {line}: {message}")]
    CountsFormat { line: usize, message: String },

    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
