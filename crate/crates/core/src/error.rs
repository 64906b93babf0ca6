use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{n} qubits exceeds the limit of {max} for this operation")]
    TooManyQubits { n: usize, max: usize },

    #[error("invalid Pauli string `{text}`: {reason}")]
    PauliParse { text: String, reason: String },

    #[error("qubit {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("operator {0} is not Hermitian")]
    NonHermitian(String),

    #[error("generators {0} and {1} do not commute")]
    NonCommuting(String, String),

    #[error("generator {0} is a product of the other generators")]
    DependentGenerator(String),

    #[error("generators produce -I; the stabilized space is empty")]
    ContainsMinusIdentity,

    #[error("invalid logical operators: {0}")]
    InvalidLogicals(String),

    #[error("damping qubit {0} leaves an empty subspace")]
    EmptySubspace(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("damping parameter {0} outside [0, 1]")]
    GammaOutOfRange(f64),

    #[error("recovery mode {0} needs a damping parameter")]
    MissingGamma(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("invalid parity-check matrix: {0}")]
    ParityCheck(String),

    #[error("syndrome collision between {0} and {1}")]
    SyndromeCollision(String, String),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("circuit text line {line}: {reason}")]
    CircuitParse { line: usize, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && (0.0..=1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::GammaOutOfRange(gamma))
    }
}
