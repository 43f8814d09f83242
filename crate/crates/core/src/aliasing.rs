//! Aliasing analysis of consistent sampling: how strongly components
//! orthogonal to `W` contaminate a reconstruction confined to `V`, and
//! the rigid rotation that minimizes the contamination.

use crate::duality::certify_dual;
use crate::error::{FrameError, Result};
use crate::frames::{Frame, SubspacePair};
use crate::geometry::{optimal_rotation, principal_angles, RotationPlan};
use crate::linalg::{eig_hermitian, operator_norm};
use crate::majorization::{potential, PotentialSpec, Spectrum};
use crate::mat::{C64, Mat};
use crate::tol::Tol;

/// Worst-case and averaged aliasing of an oblique dual pair.
#[derive(Debug, Clone)]
pub struct AliasingReport {
    /// Aliasing of the sampling geometry alone: the tangent of the
    /// largest principal angle between `V` and `W`.
    pub subspace_aliasing: f64,
    /// Worst-case amplification of a unit disturbance orthogonal to `W`
    /// by the reconstruction with this particular dual.
    pub pair_aliasing: f64,
    /// Potential-averaged aliasing, when requested.
    pub h_aliasing: Option<f64>,
    /// Unit vector orthogonal to `W` attaining `pair_aliasing`; absent
    /// when `W` fills the ambient space.
    pub witness: Option<Vec<C64>>,
}

/// Aliasing norm of the sampling geometry: `|| P_{W//V_perp} P_{W_perp} ||`.
///
/// Computed from the definition and cross-checked against the closed form
/// `tan(theta_d)` so a regression in either path is caught.
pub fn subspace_aliasing(sp: &SubspacePair, tol: &Tol) -> Result<f64> {
    let p = sp.ambient_dim();
    let d = sp.dim();
    let w_b = sp.w_basis();
    let p_wperp = &Mat::identity(p) - &(w_b * &w_b.adjoint());
    let val = operator_norm(&(&sp.projector_w_vperp() * &p_wperp))?;
    let a = principal_angles(sp, tol)?;
    let tan = a.sines()[d - 1] / a.cosines()[d - 1];
    let resid = (val - tan).abs();
    if resid > tol.tau_eq * val.max(1.0) {
        return Err(FrameError::CrossCheck {
            what: "aliasing norm against the largest-angle tangent",
            residual: resid,
        });
    }
    Ok(val)
}

/// Compression of the dual frame operator to the orthogonal complement of
/// `W`, in an explicit orthonormal basis `k` of that complement.
fn wperp_compression(g: &Frame, sp: &SubspacePair, tol: &Tol) -> Result<(Mat, Mat)> {
    let k = sp.w_perp_basis(tol)?;
    let c = &(&k.adjoint() * &g.frame_operator()) * &k;
    Ok((k, c))
}

/// Aliasing of the consistent sampling scheme built from the dual pair
/// `(f, g)`: the operator norm of the `W`-orthogonal compression of the
/// dual's frame operator, square-rooted.
///
/// `g` must certify as a dual of `f` in `V`.
pub fn pair_aliasing(f: &Frame, g: &Frame, sp: &SubspacePair, tol: &Tol) -> Result<AliasingReport> {
    certify_dual(g, f, sp, tol)?;
    let subspace = subspace_aliasing(sp, tol)?;
    let (k, c) = wperp_compression(g, sp, tol)?;
    if k.cols() == 0 {
        return Ok(AliasingReport {
            subspace_aliasing: subspace,
            pair_aliasing: 0.0,
            h_aliasing: None,
            witness: None,
        });
    }
    let eig = eig_hermitian(&c, tol)?;
    let top = eig.values[0];
    let witness = k.mul_vec(&eig.vectors.col(0));
    Ok(AliasingReport {
        subspace_aliasing: subspace,
        pair_aliasing: top.max(0.0).sqrt(),
        h_aliasing: None,
        witness: Some(witness),
    })
}

/// Potential-averaged aliasing: the trace of `h` applied to the
/// `W`-orthogonal compression of the dual's frame operator.
///
/// Only potentials with `h(0) = 0` and `h` nondecreasing are admissible —
/// the compression is singular whenever the dual stays close to `W`, so
/// potentials that blow up or pay a charge at zero have no meaning here.
pub fn h_aliasing(
    f: &Frame,
    g: &Frame,
    sp: &SubspacePair,
    spec: &PotentialSpec,
    tol: &Tol,
) -> Result<f64> {
    spec.validate()?;
    if !spec.is_nondecreasing() || !spec.vanishes_at_zero() {
        return Err(FrameError::BadPotential);
    }
    certify_dual(g, f, sp, tol)?;
    let (k, c) = wperp_compression(g, sp, tol)?;
    if k.cols() == 0 {
        return Ok(0.0);
    }
    let eig = eig_hermitian(&c, tol)?;
    // The compression is PSD; clamp the roundoff-negative eigenvalues.
    let clamped = Spectrum::new(eig.values.iter().map(|&x| x.max(0.0)).collect())?;
    potential(spec, &clamped, k.cols())
}

/// The rotation of the frame minimizing the pair aliasing of its
/// canonical dual, with the minimum it attains.
///
/// Over all rotations fixing `W`, the aliasing of the canonical pair is
/// at least `max_j tan(theta_j) / sqrt(lambda_{d-j+1})`; the returned
/// rotation attains the bound, and attainment is verified before
/// returning.
pub fn min_aliasing_rotation(
    f: &Frame,
    sp: &SubspacePair,
    tol: &Tol,
) -> Result<(RotationPlan, f64)> {
    let plan = optimal_rotation(f, sp, tol)?;
    let d = sp.dim();
    let angles = principal_angles(sp, tol)?;
    let lv = f.eigenlist(tol)?;
    let achieved = (0..d)
        .map(|j| (angles.sines()[j] / angles.cosines()[j]) / lv.values()[d - 1 - j].sqrt())
        .fold(0.0f64, f64::max);

    let rotated = f.transform(&plan.u, tol)?;
    let dual = rotated.canonical_v_dual(sp, tol)?;
    let report = pair_aliasing(&rotated, &dual, sp, tol)?;
    let resid = (report.pair_aliasing - achieved).abs();
    if resid > tol.tau_eq * achieved.max(1.0) {
        return Err(FrameError::CrossCheck {
            what: "aliasing attained by the optimal rotation",
            residual: resid,
        });
    }
    Ok((plan, achieved))
}
