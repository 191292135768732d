//! Error taxonomy shared by every module in the crate.
//!
//! Variants are grouped by how the CLI must exit: usage problems (code 1),
//! violated input or mathematical preconditions (code 2), certification
//! failures (code 3), and convergence or precision failures (code 4).

use thiserror::Error;

/// Exit-code class of an error. The CLI maps these to process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed invocation or unreadable/ill-formed input files.
    Usage,
    /// Well-formed input that violates a mathematical precondition.
    Precondition,
    /// A certification check ran to completion and failed.
    Certification,
    /// An iterative computation could not reach the requested accuracy.
    Convergence,
}

impl ErrorClass {
    #[must_use]
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 1,
            ErrorClass::Precondition => 2,
            ErrorClass::Certification => 3,
            ErrorClass::Convergence => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    // ---- construction of fields and towers ----
    #[error("polynomial is not monic: {0}")]
    NonMonic(String),
    #[error("polynomial is reducible over Q: {0}")]
    ReduciblePolynomial(String),
    #[error("requested precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("field has no CM subfield: {0}")]
    NoCMSubfield(String),
    #[error("tower data is inconsistent: {0}")]
    InconsistentTower(String),
    #[error("matrix is singular: {0}")]
    SingularMatrix(String),

    // ---- ideal arithmetic ----
    #[error("prime divides an order index that prevents this method: {0}")]
    IndexDivisor(String),
    #[error("modulus norm exceeds the supported bound: {0}")]
    ModulusTooLarge(String),
    #[error("field is not totally imaginary: {0}")]
    NotTotallyImaginary(String),
    #[error("principality could not be decided: {0}")]
    UnknownPrincipality(String),

    // ---- characters ----
    #[error("infinity type is not constant on fibers over the CM subfield: {0}")]
    FiberInconstant(String),
    #[error("purity violation in infinity type: {0}")]
    PurityViolation(String),
    #[error("no character with the requested data exists: {0}")]
    NoCharacterExists(String),
    #[error("ideal is not coprime to the modulus: {0}")]
    NotCoprime(String),

    // ---- L-functions ----
    #[error("gamma factor has a pole at the requested point: {0}")]
    PoleAtS(String),
    #[error("character is not critical: {0}")]
    NotCritical(String),
    #[error("root number solve is inconsistent: {0}")]
    RootNumberInconsistent(String),
    #[error("series did not converge to the requested accuracy: {0}")]
    NotConverged(String),

    // ---- periods and signs ----
    #[error("permutation is not tower compatible: {0}")]
    NotTowerCompatible(String),

    // ---- local integrals ----
    #[error("prime is ramified or divides the modulus: {0}")]
    Ramified(String),
    #[error("quadrature failed to reach tolerance: {0}")]
    QuadratureFailed(String),

    // ---- weight combinatorics ----
    #[error("index data does not match the tower: {0}")]
    IndexMismatch(String),
    #[error("matrix argument is singular where a cofactor is required: {0}")]
    SingularInput(String),
    #[error("bottom row vanishes at an archimedean place: {0}")]
    ZeroBottomRow(String),

    // ---- certification ----
    #[error("restricted character L-value vanishes: {0}")]
    RestrictionLValueZero(String),
    #[error("no algebraic number of admissible height matches: {0}")]
    HeightExceeded(String),
    #[error("Galois covariance check failed: {0}")]
    CovarianceViolation(String),

    // ---- general ----
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    #[must_use]
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidInput(_) | Io(_) => ErrorClass::Usage,
            NonMonic(_) | ReduciblePolynomial(_) | PrecisionTooLow(_) | NoCMSubfield(_)
            | InconsistentTower(_) | SingularMatrix(_) | IndexDivisor(_) | ModulusTooLarge(_)
            | NotTotallyImaginary(_) | UnknownPrincipality(_) | FiberInconstant(_)
            | PurityViolation(_) | NoCharacterExists(_) | NotCoprime(_) | PoleAtS(_)
            | NotCritical(_) | NotTowerCompatible(_) | Ramified(_) | IndexMismatch(_)
            | SingularInput(_) | ZeroBottomRow(_) | RestrictionLValueZero(_) | Internal(_) => {
                ErrorClass::Precondition
            }
            CovarianceViolation(_) | HeightExceeded(_) => ErrorClass::Certification,
            RootNumberInconsistent(_) | NotConverged(_) | QuadratureFailed(_) => {
                ErrorClass::Convergence
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
