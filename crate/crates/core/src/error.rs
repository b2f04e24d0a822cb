use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid conjugation: {0}")]
    InvalidConjugation(String),

    #[error("matrix is not Hermitian: relative asymmetry |h - h^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("generator does not anticommute with the conjugation: |Gamma h Gamma + h| = {0:e}")]
    NotSelfDual(f64),

    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "zero mode present (eigenvalue {energy:e}); this requires absence of zero modes for h"
    )]
    ZeroMode { energy: f64 },

    #[error("mode index {index} out of range ({available} positive modes)")]
    ModeOutOfRange { index: usize, available: usize },

    #[error("inadmissible excitation vector: {0}")]
    Inadmissible(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("matrix is not antisymmetric: |A + A^T| = {0:e}")]
    NotAntisymmetric(f64),

    #[error("singular matrix (condition estimate {condition:e}){hint}")]
    Singular { condition: f64, hint: &'static str },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("state carries no KMS flow")]
    MissingFlow,

    #[error("polarization does not match the KMS polarization of the flow: deviation {0:e}")]
    FlowMismatch(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("support condition violated: reference density has eigenvalue {0:e}")]
    Support(f64),

    #[error("unexpected imaginary residue {0:e} in a real-valued quantity")]
    ComplexResidue(f64),
}
