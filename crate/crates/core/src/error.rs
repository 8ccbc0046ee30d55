use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("density matrix is not physical: {0}")]
    NotPhysical(String),

    #[error("spectrum is degenerate (1 - 4 det = {discriminant:e}); eigenvectors are not unique")]
    DegenerateSpectrum { discriminant: f64 },

    #[error("basis kets collapse: |<psi1|psi2>| = {overlap} is not below 1")]
    BasisCollapse { overlap: f64 },

    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid spectral decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("finite-difference step {step:e} is below the noise floor")]
    StepTooSmall { step: f64 },

    #[error("quantum Fisher information {qfi} carries no information")]
    ZeroInformation { qfi: f64 },

    #[error("repetition count must be at least 1")]
    NoRepetitions,

    #[error("coherent state |{alpha_abs}| truncated at n_max = {n_max} loses {tail:e} of its norm (allowed {allowed:e})")]
    TruncationTooLossy {
        alpha_abs: f64,
        n_max: usize,
        tail: f64,
        allowed: f64,
    },

    #[error("Fock dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid Fock space: {0}")]
    InvalidSpace(String),

    #[error("mode {mode} is out of range for a {modes}-mode space")]
    InvalidMode { mode: usize, modes: usize },

    #[error("transmission {0} is outside [0, 1]")]
    InvalidTransmission(f64),

    #[error("reflection {0} is outside [0, 1]")]
    InvalidReflection(f64),

    #[error("degenerate limit: {0}")]
    DegenerateLimit(&'static str),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
