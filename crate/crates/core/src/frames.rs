//! Finite frames, their operators, and canonical duals.
//!
//! A frame is stored through its synthesis matrix: the `p x n` matrix whose
//! columns are the frame vectors. The span dimension is always inferred
//! from the numerical rank, never trusted from metadata.

use crate::error::{FrameError, Result};
use crate::linalg::{
    check_orthonormal, eig_hermitian, oblique_projector, orthonormal_complement, pinv, svd,
};
use crate::majorization::Spectrum;
use crate::mat::Mat;
use crate::tol::Tol;

/// Two subspaces count as equal when the sine of their largest principal
/// angle is below this bound.
pub const SUBSPACE_EQ_SINE: f64 = 1e-8;

/// A finite sequence of vectors spanning a subspace of `C^p`.
#[derive(Debug, Clone)]
pub struct Frame {
    synthesis: Mat,
    span_dim: usize,
    span_basis: Mat,
}

impl Frame {
    /// Build a frame from its synthesis matrix (columns are the vectors).
    ///
    /// The span dimension is the numerical rank of the matrix; a zero
    /// sequence is rejected.
    pub fn new(synthesis: Mat, tol: &Tol) -> Result<Frame> {
        if synthesis.rows() == 0 || synthesis.cols() == 0 {
            return Err(FrameError::InvalidArgument(
                "a frame needs at least one vector in a nonzero ambient space".into(),
            ));
        }
        let f = svd(&synthesis)?;
        let d = f.rank(tol);
        if d == 0 {
            return Err(FrameError::InvalidArgument(
                "all frame vectors are numerically zero".into(),
            ));
        }
        let span_basis = Mat::from_fn(synthesis.rows(), d, |i, j| f.u[(i, j)]);
        Ok(Frame {
            synthesis,
            span_dim: d,
            span_basis,
        })
    }

    /// The `p x n` matrix whose column `i` is the frame vector `f_i`.
    pub fn synthesis(&self) -> &Mat {
        &self.synthesis
    }

    /// Ambient dimension `p`.
    pub fn ambient_dim(&self) -> usize {
        self.synthesis.rows()
    }

    /// Number of vectors `n`.
    pub fn len(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension `d` of the spanned subspace.
    pub fn span_dim(&self) -> usize {
        self.span_dim
    }

    /// Orthonormal basis of the spanned subspace (`p x d`).
    pub fn span_basis(&self) -> &Mat {
        &self.span_basis
    }

    /// The frame operator `S = T T*`, Hermitian positive semidefinite with
    /// range equal to the span.
    pub fn frame_operator(&self) -> Mat {
        &self.synthesis * &self.synthesis.adjoint()
    }

    /// Eigenvalues of the frame operator, nonincreasing, padded to ambient
    /// length: the first `d` entries are positive, the rest exactly zero.
    pub fn eigenlist(&self, tol: &Tol) -> Result<Spectrum> {
        let e = eig_hermitian(&self.frame_operator(), tol)?;
        let mut vals = e.values;
        for v in vals.iter_mut().skip(self.span_dim) {
            *v = 0.0;
        }
        Spectrum::new(vals)
    }

    /// The canonical dual: vectors `S^+ f_i`, spanning the same subspace.
    pub fn canonical_dual(&self, tol: &Tol) -> Result<Frame> {
        let s_pinv = pinv(&self.frame_operator(), tol)?;
        Frame::new(&s_pinv * &self.synthesis, tol)
    }

    /// Sine of the largest principal angle between the span of this frame
    /// and the column span of `basis` (orthonormal). Infinity when the
    /// dimensions differ.
    pub fn span_gap(&self, basis: &Mat) -> Result<f64> {
        if basis.cols() != self.span_dim || basis.rows() != self.ambient_dim() {
            return Ok(f64::INFINITY);
        }
        // Largest singular value of (I - P_basis) applied to the span basis.
        let proj = basis * &(&basis.adjoint() * &self.span_basis);
        let resid = &self.span_basis - &proj;
        let f = svd(&resid)?;
        Ok(f.s.first().copied().unwrap_or(0.0).min(1.0))
    }

    /// The canonical dual transported into `V`: vectors
    /// `P_{V // W_perp} S^+ f_i`.
    ///
    /// The frame must span the `W` side of the pair.
    pub fn canonical_v_dual(&self, sp: &SubspacePair, tol: &Tol) -> Result<Frame> {
        let sine = self.span_gap(sp.w_basis())?;
        if sine > SUBSPACE_EQ_SINE {
            return Err(FrameError::SpanMismatch { sine });
        }
        let s_pinv = pinv(&self.frame_operator(), tol)?;
        let t = &(sp.projector_v_wperp() * &s_pinv) * &self.synthesis;
        Frame::new(t, tol)
    }

    /// True iff the frame operator is the orthogonal projector onto the
    /// column span of `basis`, within `tol.tau_eq` in Frobenius norm.
    pub fn is_parseval_for(&self, basis: &Mat, tol: &Tol) -> Result<bool> {
        check_orthonormal(basis, tol)?;
        let proj = basis * &basis.adjoint();
        Ok((&self.frame_operator() - &proj).fro_norm() <= tol.tau_eq)
    }

    /// Apply a linear map to every vector: the frame `{U f_i}`.
    pub fn transform(&self, u: &Mat, tol: &Tol) -> Result<Frame> {
        Frame::new(u * &self.synthesis, tol)
    }
}

/// A pair of equal-dimensional subspaces `(V, W)` of `C^p` in direct sum
/// with each other's orthogonal complement, with the oblique projector
/// onto `V` along `W_perp` cached.
#[derive(Debug, Clone)]
pub struct SubspacePair {
    v_basis: Mat,
    w_basis: Mat,
    p_oblique: Mat,
}

impl SubspacePair {
    /// Validate orthonormality of both bases and the direct-sum condition,
    /// and cache the oblique projector.
    pub fn new(v_basis: Mat, w_basis: Mat, tol: &Tol) -> Result<SubspacePair> {
        if v_basis.cols() == 0 {
            return Err(FrameError::InvalidArgument(
                "subspaces must have dimension at least one".into(),
            ));
        }
        let p_oblique = oblique_projector(&v_basis, &w_basis, tol)?;
        Ok(SubspacePair {
            v_basis,
            w_basis,
            p_oblique,
        })
    }

    /// The pair `(W, W)`: oblique projection degenerates to orthogonal.
    pub fn coincident(w_basis: Mat, tol: &Tol) -> Result<SubspacePair> {
        SubspacePair::new(w_basis.clone(), w_basis, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.v_basis.rows()
    }

    /// Common dimension of `V` and `W`.
    pub fn dim(&self) -> usize {
        self.v_basis.cols()
    }

    pub fn v_basis(&self) -> &Mat {
        &self.v_basis
    }

    pub fn w_basis(&self) -> &Mat {
        &self.w_basis
    }

    /// The oblique projector onto `V` along `W_perp`.
    pub fn projector_v_wperp(&self) -> &Mat {
        &self.p_oblique
    }

    /// The oblique projector onto `W` along `V_perp` (the adjoint of the
    /// cached one).
    pub fn projector_w_vperp(&self) -> Mat {
        self.p_oblique.adjoint()
    }

    /// Orthonormal basis of `W_perp` (`p x (p - d)`).
    pub fn w_perp_basis(&self, tol: &Tol) -> Result<Mat> {
        orthonormal_complement(&self.w_basis, tol)
    }
}
