//! Error type shared by all numerical operations in this crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by bicomplex arithmetic, series operations, factorization
/// and realization routines.
///
/// `channel` fields identify the idempotent channel (1 or 2) of a bicomplex
/// computation; channel 0 marks an operation on a plain complex matrix
/// series (the ♯-symmetric route).
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Inversion of a bicomplex zero divisor (a channel is numerically zero).
    #[error("zero divisor: idempotent channel moduli ({l1:.3e}, {l2:.3e}) below tolerance {tol:.3e}")]
    ZeroDivisor { l1: f64, l2: f64, tol: f64 },

    /// Operands have incompatible shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A complex matrix is not bicomplex ♯-symmetric within tolerance.
    #[error("matrix is not ♯-symmetric: relative defect {defect:.3e} exceeds {tol:.3e}")]
    NotSharpSymmetric { defect: f64, tol: f64 },

    /// ♯-conjugation requires even dimensions.
    #[error("♯-conjugation needs even dimensions, got {rows}x{cols}")]
    OddDimension { rows: usize, cols: usize },

    /// Similarity conjugation by a singular matrix.
    #[error("similarity matrix Y is singular")]
    SingularY,

    /// A channel of a series value is singular somewhere on the boundary,
    /// so Wiener inversion is impossible.
    #[error("not invertible on the boundary: channel {channel} at angle {theta:.6} has smallest singular value {sigma_min:.3e} <= {tol:.3e}")]
    NotInvertibleOnBoundary {
        channel: u8,
        theta: f64,
        sigma_min: f64,
        tol: f64,
    },

    /// A density fails the pointwise Hermitian-positive-definite test.
    #[error("not positive: channel {channel} at angle {theta:.6} has minimum eigenvalue {min_eig:.3e} (tolerance {tol:.3e})")]
    NotPositive {
        channel: u8,
        theta: f64,
        min_eig: f64,
        tol: f64,
    },

    /// Factorization iteration stalled above tolerance.
    #[error("spectral factorization did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Two factors are not related by a constant right unitary.
    #[error("factors are not unitarily related: residual {residual:.3e}, unitarity defect {unitary_defect:.3e}")]
    NotRelated { residual: f64, unitary_defect: f64 },

    /// Requested normalization is unavailable for this input.
    #[error("normalization unavailable: {0}")]
    NotNormalizable(String),

    /// Partial-fraction input lists the same pole twice.
    #[error("duplicate pole at {re}+{im}i")]
    DuplicatePole { re: f64, im: f64 },

    /// Resolvent solve at an (approximate) eigenvalue of A.
    #[error("singular resolvent at z = {re}+{im}i")]
    SingularResolvent { re: f64, im: f64 },

    /// A has an eigenvalue too close to the unit circle.
    #[error("eigenvalue {re}+{im}i lies on the unit circle within {tol:.3e}")]
    EigenvalueOnCircle { re: f64, im: f64, tol: f64 },

    /// Stein equation with spectral radius at or above one.
    #[error("unstable coefficient: spectral radius {rho} >= 1")]
    UnstableA { rho: f64 },

    /// The `a` block of a spectral-factor realization is singular.
    #[error("state matrix a is singular")]
    SingularA,

    /// The `d` block of a spectral-factor realization is singular.
    #[error("feedthrough d is singular")]
    SingularD,

    /// A spectral-factor realization must have all stability spectra inside
    /// the open unit disk.
    #[error("not stable: spectral radius of {which} is {rho}")]
    NotStable { which: &'static str, rho: f64 },

    /// Schur iteration failed to converge.
    #[error("Schur decomposition failed to converge")]
    SchurFailed,

    /// Pole re-extraction could not reproduce the sampled function.
    #[error("pole re-extraction failed: reconstruction residual {residual:.3e} exceeds {tol:.3e}")]
    PoleExtraction { residual: f64, tol: f64 },

    /// A precondition on a parameter was violated (grid sizes, truncation
    /// orders, non-finite inputs, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
