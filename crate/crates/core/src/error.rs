use thiserror::Error;

/// Library-wide error type. Variants mirror the failure modes of the
/// individual operations (eigensolver, spectral calculus, checkers,
/// generators) so callers can match on the specific condition.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ‖A − A*‖_F = {deviation:.3e} exceeds {bound:.3e}")]
    NotHermitian { deviation: f64, bound: f64 },

    #[error("eigensolver did not converge in {sweeps} sweeps (off-diagonal mass {off_mass:.3e})")]
    NoConvergence { sweeps: usize, off_mass: f64 },

    #[error("rank {k} outside valid range 1..={max}")]
    BadRank { k: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),

    #[error("basis columns are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("argument {t} outside the domain {domain}")]
    OutOfDomain { t: f64, domain: String },

    #[error("spectrum leaves the function domain: eigenvalue {eigenvalue} vs domain {domain}")]
    SpectrumOutOfDomain { eigenvalue: f64, domain: String },

    #[error("function domain {domain} too small: needs to cover [0, {needed}]")]
    DomainTooSmall { domain: String, needed: f64 },

    #[error("function not admissible: {0}")]
    NotAdmissible(String),

    #[error("function not invertible on the requested interval: {0}")]
    NotInvertible(String),

    #[error("matrix is not positive semidefinite (λ_min = {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator is not a contraction (‖Z‖_∞ = {operator_norm})")]
    NotContraction { operator_norm: f64 },

    #[error("operator is not expansive (λ_min(Z*Z) = {min_gram_eigenvalue})")]
    NotExpansive { min_gram_eigenvalue: f64 },

    #[error("family is not an isometric column (‖ΣZᵢ*Zᵢ − I‖_F = {deviation:.3e})")]
    NotIsometricColumn { deviation: f64 },

    #[error("eigenvalue dominance fails at index {index} (margin {margin:.3e})")]
    DominanceFails { index: usize, margin: f64 },

    #[error("constructive decomposition failed: certificate margin {margin:.3e}")]
    ConstructionFailed { margin: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("genericity condition failed: σ_min = {sigma_min:.3e}")]
    GenericityFailed { sigma_min: f64 },

    #[error("unknown statement id: {0}")]
    UnknownStatement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
