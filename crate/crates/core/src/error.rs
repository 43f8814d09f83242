//! Shared error type for all numerical and structural failures.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, FrameError>;

/// Everything that can go wrong while validating inputs or running the
/// frame-theoretic operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum FrameError {
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("iteration did not converge within {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("subspaces are not complementary: smallest overlap singular value {sigma_min:.3e}")]
    NotComplementary { sigma_min: f64 },

    #[error("basis columns are not orthonormal: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotOrthonormal { defect: f64, tol: f64 },

    #[error("frame span does not match the designated subspace (sine of largest principal angle {sine:.3e})")]
    SpanMismatch { sine: f64 },

    #[error("sequence is not a valid dual: {reason} (residual {residual:.3e})")]
    NotADual { reason: &'static str, residual: f64 },

    #[error("no dual with the requested property exists for this frame/subspace configuration")]
    NotFeasible,

    #[error("trace budget {t} is below the attainable minimum {minimum}")]
    BadTrace { t: f64, minimum: f64 },

    #[error("frozen-block size m = {m} must be smaller than the spectrum length d = {d}")]
    BadM { m: i64, d: usize },

    #[error("constructed perturbation exceeds the rank budget ({rank} > {budget}); internal inconsistency")]
    RankBudgetExceeded { rank: usize, budget: usize },

    #[error("potential requires strictly positive eigenvalues, found {value:.3e} at position {index}")]
    NonPositiveEigenvalue { index: usize, value: f64 },

    #[error("potential specification is not admissible for this operation")]
    BadPotential,

    #[error("n = {n} < 2d = {two_d}: only conjectured, not proven; rerun with the experiment flag to sample")]
    ConjectureRegime { n: usize, two_d: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal cross-check `{what}` failed with residual {residual:.3e}")]
    CrossCheck { what: &'static str, residual: f64 },
}
