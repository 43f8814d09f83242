//! Global tolerance policy.

use crate::error::{FrameError, Result};

/// Numerical tolerances shared by every operation in the crate.
///
/// `tau_rank` is a *relative* singular-value cutoff: a singular value counts
/// as zero when it falls below `tau_rank` times the largest one. `tau_eq`
/// bounds the residual of operator identities (duality, reconstruction,
/// Penrose identities). `tau_sym` bounds the entrywise deviation from
/// Hermitian symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub tau_rank: f64,
    pub tau_eq: f64,
    pub tau_sym: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            tau_rank: 1e-10,
            tau_eq: 1e-8,
            tau_sym: 1e-10,
        }
    }
}

impl Tol {
    pub fn validate(&self) -> Result<()> {
        if self.tau_rank > 0.0 && self.tau_eq > 0.0 && self.tau_sym > 0.0 {
            Ok(())
        } else {
            Err(FrameError::InvalidArgument(
                "all tolerances must be strictly positive".into(),
            ))
        }
    }

    /// Absolute rank cutoff for a set of singular values.
    pub fn rank_cutoff(&self, sigma_max: f64) -> f64 {
        self.tau_rank * sigma_max
    }
}
