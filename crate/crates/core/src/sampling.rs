//! Seeded random generators for frames, subspaces, and unitaries.
//!
//! Everything takes an explicit ChaCha8 generator, so a run is fully
//! reproducible from a single `u64` seed and identical across platforms.
//! Rejection loops (for conditioning floors) consume randomness from the
//! same generator and stay deterministic.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{FrameError, Result};
use crate::frames::{Frame, SubspacePair};
use crate::linalg::{orthonormalize, svd};
use crate::majorization::Spectrum;
use crate::mat::{C64, Mat};
use crate::tol::Tol;

const MAX_ATTEMPTS: usize = 200;

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(i, j)] = C64::new(re, im);
        }
    }
    m
}

/// Haar-distributed unitary of size `n`, via Gram-Schmidt on a Gaussian
/// matrix (the triangular factor has positive diagonal, which makes the
/// orthonormal factor Haar).
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize, tol: &Tol) -> Result<Mat> {
    for _ in 0..MAX_ATTEMPTS {
        let g = gaussian_mat(rng, n, n);
        let (q, rank) = orthonormalize(&g, tol);
        if rank == n {
            return Ok(q);
        }
    }
    Err(FrameError::InvalidArgument(
        "random unitary generation kept producing singular samples".into(),
    ))
}

/// Orthonormal basis of a uniformly random `d`-dimensional subspace of
/// `C^p`.
pub fn random_orthonormal_basis(
    rng: &mut ChaCha8Rng,
    p: usize,
    d: usize,
    tol: &Tol,
) -> Result<Mat> {
    if d > p {
        return Err(FrameError::InvalidArgument(format!(
            "subspace dimension {d} exceeds ambient dimension {p}"
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let g = gaussian_mat(rng, p, d);
        let (q, rank) = orthonormalize(&g, tol);
        if rank == d {
            return Ok(q);
        }
    }
    Err(FrameError::InvalidArgument(
        "random basis generation kept producing rank-deficient samples".into(),
    ))
}

/// Random complementary pair `(V, W)` of `d`-dimensional subspaces of
/// `C^p`, resampled until the smallest singular value of `W* V` is at
/// least `overlap_floor`. The floor keeps oblique projectors and angle
/// computations well conditioned.
pub fn random_complementary_pair(
    rng: &mut ChaCha8Rng,
    p: usize,
    d: usize,
    overlap_floor: f64,
    tol: &Tol,
) -> Result<SubspacePair> {
    if d == 0 || d > p {
        return Err(FrameError::InvalidArgument(format!(
            "cannot sample a pair with d = {d} in ambient dimension {p}"
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let w = random_orthonormal_basis(rng, p, d, tol)?;
        let v = random_orthonormal_basis(rng, p, d, tol)?;
        let cross = &w.adjoint() * &v;
        let sigma_min = svd(&cross)?.s.last().copied().unwrap_or(0.0);
        if sigma_min >= overlap_floor {
            return SubspacePair::new(v, w, tol);
        }
    }
    Err(FrameError::InvalidArgument(format!(
        "could not sample a pair with overlap floor {overlap_floor} in {MAX_ATTEMPTS} attempts"
    )))
}

/// Random frame of `n` vectors spanning exactly the column span of
/// `basis` (orthonormal, `p x d`), with a mild conditioning floor on the
/// synthesis operator.
pub fn random_frame_in(
    rng: &mut ChaCha8Rng,
    basis: &Mat,
    n: usize,
    tol: &Tol,
) -> Result<Frame> {
    let d = basis.cols();
    if n < d {
        return Err(FrameError::InvalidArgument(format!(
            "{n} vectors cannot span a {d}-dimensional subspace"
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let coeffs = gaussian_mat(rng, d, n);
        let t = basis * &coeffs;
        let s = svd(&t)?.s;
        let smax = s[0];
        let smin = s[d - 1];
        if smin >= 0.05 * smax {
            return Frame::new(t, tol);
        }
    }
    Err(FrameError::InvalidArgument(
        "random frame generation kept producing ill-conditioned samples".into(),
    ))
}

/// Random unitary of `C^p` that maps the column span of `w_basis` onto
/// itself (block Haar on the subspace and on its orthogonal complement).
pub fn random_w_preserving_unitary(
    rng: &mut ChaCha8Rng,
    w_basis: &Mat,
    tol: &Tol,
) -> Result<Mat> {
    let p = w_basis.rows();
    let d = w_basis.cols();
    let wp = crate::linalg::orthonormal_complement(w_basis, tol)?;
    let a = haar_unitary(rng, d, tol)?;
    let inner = &(w_basis * &a) * &w_basis.adjoint();
    if d == p {
        return Ok(inner);
    }
    let b = haar_unitary(rng, p - d, tol)?;
    let outer = &(&wp * &b) * &wp.adjoint();
    Ok(&inner + &outer)
}

/// Spectrum with entries uniform on `[0, max)`, sorted by construction.
pub fn random_spectrum(rng: &mut ChaCha8Rng, len: usize, max: f64) -> Result<Spectrum> {
    let vals: Vec<f64> = (0..len).map(|_| rng.random::<f64>() * max).collect();
    Spectrum::new(vals)
}
