//! Numerical kernels: Hermitian eigendecomposition, SVD, pseudoinverse,
//! oblique projectors, and orthonormalization.
//!
//! Both decompositions use cyclic Jacobi iterations with a fixed sweep
//! budget. Rotations are applied in a deterministic pivot order, so repeated
//! runs on the same input produce bitwise-identical output.

use crate::error::{FrameError, Result};
use crate::mat::{vdot, vnorm, C64, Mat};
use crate::tol::Tol;

const MAX_SWEEPS: usize = 30;

/// Eigendecomposition of a Hermitian matrix: `A = Q diag(values) Q*`.
///
/// `values` are real, sorted descending (signed order). Column `j` of
/// `vectors` is the eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct EigH {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl EigH {
    pub fn reconstruct(&self) -> Mat {
        let d = Mat::diag(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Thin singular value decomposition `A = U diag(s) V*` with
/// `k = min(rows, cols)` columns in `u` and `v`, `s` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Mat,
    pub s: Vec<f64>,
    pub v: Mat,
}

impl Svd {
    /// Numerical rank under the relative cutoff `tol.tau_rank`.
    pub fn rank(&self, tol: &Tol) -> usize {
        rank_from_singular(&self.s, tol)
    }
}

pub fn rank_from_singular(s: &[f64], tol: &Tol) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let cut = tol.rank_cutoff(smax);
    s.iter().take_while(|&&x| x > cut).count()
}

/// Complex Jacobi rotation `[[c, s], [-conj(s), c]]` with real `c >= 0`.
#[derive(Clone, Copy)]
struct Rot {
    c: f64,
    s: C64,
}

/// Rotation that diagonalizes the Hermitian block `[[alpha, gamma],
/// [conj(gamma), beta]]` (alpha, beta real, gamma nonzero).
fn jacobi_rot(alpha: f64, beta: f64, gamma: C64) -> Rot {
    let g = gamma.norm();
    debug_assert!(g > 0.0);
    // Componentwise division: `gamma / (g + 0i)` would square `g` inside
    // the complex division and can underflow for tiny pivots.
    let phase = C64::new(gamma.re / g, gamma.im / g);
    let delta = (alpha - beta) / (2.0 * g);
    let sgn = if delta >= 0.0 { 1.0 } else { -1.0 };
    let t = -sgn / (delta.abs() + (delta * delta + 1.0).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    Rot {
        c,
        s: phase * C64::new(t * c, 0.0),
    }
}

/// Right-multiply columns `p`, `q` of `m` by the embedded rotation.
fn rot_cols(m: &mut Mat, p: usize, q: usize, r: &Rot) {
    for i in 0..m.rows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)];
        m[(i, p)] = xp * r.c - xq * r.s.conj();
        m[(i, q)] = xp * r.s + xq * r.c;
    }
}

/// Left-multiply rows `p`, `q` of `m` by the adjoint of the embedded rotation.
fn rot_rows(m: &mut Mat, p: usize, q: usize, r: &Rot) {
    for j in 0..m.cols() {
        let xp = m[(p, j)];
        let xq = m[(q, j)];
        m[(p, j)] = xp * r.c - xq * r.s;
        m[(q, j)] = xp * r.s.conj() + xq * r.c;
    }
}

fn off_diag_norm(h: &Mat) -> f64 {
    let n = h.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += h[(i, j)].norm_sqr();
        }
    }
    (2.0 * acc).sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Rejects inputs whose symmetry defect exceeds `tol.tau_sym`; the
/// computation then runs on the symmetrized part `(A + A*) / 2`.
pub fn eig_hermitian(a: &Mat, tol: &Tol) -> Result<EigH> {
    if !a.is_square() {
        return Err(FrameError::InvalidArgument(
            "eigendecomposition needs a square matrix".into(),
        ));
    }
    let defect = a.hermitian_defect();
    if defect > tol.tau_sym {
        return Err(FrameError::NotHermitian {
            defect,
            tol: tol.tau_sym,
        });
    }
    let n = a.rows();
    let mut h = Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut q = Mat::identity(n);
    let scale = h.fro_norm();
    if n == 0 || scale == 0.0 {
        return Ok(EigH {
            values: vec![0.0; n],
            vectors: q,
        });
    }
    let thresh = 1e-14 * scale;
    let skip = thresh / (n as f64 * n as f64 * 10.0);
    let mut off = off_diag_norm(&h);
    for _ in 0..MAX_SWEEPS {
        if off <= thresh {
            break;
        }
        for p in 0..n - 1 {
            for jq in (p + 1)..n {
                let gamma = h[(p, jq)];
                if gamma.norm() <= skip {
                    continue;
                }
                let alpha = h[(p, p)].re;
                let beta = h[(jq, jq)].re;
                let r = jacobi_rot(alpha, beta, gamma);
                rot_rows(&mut h, p, jq, &r);
                rot_cols(&mut h, p, jq, &r);
                rot_cols(&mut q, p, jq, &r);
                // The pivot entry is zero by construction; enforce it exactly.
                h[(p, jq)] = C64::new(0.0, 0.0);
                h[(jq, p)] = C64::new(0.0, 0.0);
                h[(p, p)] = C64::new(h[(p, p)].re, 0.0);
                h[(jq, jq)] = C64::new(h[(jq, jq)].re, 0.0);
            }
        }
        off = off_diag_norm(&h);
    }
    if off > thresh {
        return Err(FrameError::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual: off / scale,
        });
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    idx.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values: Vec<f64> = idx.iter().map(|&i| diag[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| q[(i, idx[j])]);
    Ok(EigH { values, vectors })
}

/// One-sided Jacobi SVD for a matrix with at least as many rows as columns.
fn svd_tall(a: &Mat) -> Result<Svd> {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);
    let mut b = a.clone();
    let mut v = Mat::identity(n);
    if n == 0 || b.fro_norm() == 0.0 {
        let u = Mat::from_fn(m, n, |i, j| {
            C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        });
        return Ok(Svd {
            u,
            s: vec![0.0; n],
            v,
        });
    }
    let eps = 1e-15;
    // A column this far below the matrix scale is cancellation residue; a
    // rank-deficient matrix would otherwise keep feeding it meaningless
    // rotations until its norm underflows.
    let dead = (b.fro_norm() * 1e-20).powi(2);
    let mut worst = 0.0f64;
    let mut clean = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = 0.0;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = C64::new(0.0, 0.0);
                for i in 0..m {
                    let xp = b[(i, p)];
                    let xq = b[(i, q)];
                    app += xp.norm_sqr();
                    aqq += xq.norm_sqr();
                    apq += xp.conj() * xq;
                }
                if app <= dead || aqq <= dead {
                    continue;
                }
                let rel = apq.norm() / (app.sqrt() * aqq.sqrt());
                worst = worst.max(rel);
                if rel <= eps {
                    continue;
                }
                let r = jacobi_rot(app, aqq, apq);
                rot_cols(&mut b, p, q, &r);
                rot_cols(&mut v, p, q, &r);
                rotated = true;
            }
        }
        if !rotated {
            clean = true;
            break;
        }
    }
    if !clean && worst > 1e-12 {
        return Err(FrameError::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual: worst,
        });
    }
    let mut norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| b[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sorted_b = Mat::from_fn(m, n, |i, j| b[(i, idx[j])]);
    let sorted_v = Mat::from_fn(n, n, |i, j| v[(i, idx[j])]);
    norms = idx.iter().map(|&i| norms[i]).collect();
    let smax = norms[0];
    // Columns with negligible norm cannot be normalized reliably; their
    // left vectors come from an orthonormal completion instead.
    let ucut = smax * 1e-13;
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut firm = 0;
    for (j, &nj) in norms.iter().enumerate() {
        if nj > ucut {
            let col = sorted_b.col(j);
            ucols.push(col.iter().map(|z| z / C64::new(nj, 0.0)).collect());
            firm = j + 1;
        } else {
            break;
        }
    }
    if firm < n {
        let extra = complete_columns(&ucols, n - firm, m);
        ucols.extend(extra);
    }
    Ok(Svd {
        u: Mat::from_cols(&ucols),
        s: norms,
        v: sorted_v,
    })
}

/// Thin SVD. Works for any shape; the wide case goes through the adjoint.
pub fn svd(a: &Mat) -> Result<Svd> {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let f = svd_tall(&a.adjoint())?;
        Ok(Svd {
            u: f.v,
            s: f.s,
            v: f.u,
        })
    }
}

/// Largest singular value.
pub fn operator_norm(a: &Mat) -> Result<f64> {
    Ok(svd(a)?.s.first().copied().unwrap_or(0.0))
}

/// Moore-Penrose pseudoinverse with the relative rank cutoff `tol.tau_rank`.
pub fn pinv(a: &Mat, tol: &Tol) -> Result<Mat> {
    let f = svd(a)?;
    let r = f.rank(tol);
    let mut out = Mat::zeros(a.cols(), a.rows());
    for k in 0..r {
        let w = 1.0 / f.s[k];
        for i in 0..a.cols() {
            for j in 0..a.rows() {
                out[(i, j)] += f.v[(i, k)] * C64::new(w, 0.0) * f.u[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

pub fn check_orthonormal(basis: &Mat, tol: &Tol) -> Result<()> {
    let d = basis.cols();
    let gram = &basis.adjoint() * basis;
    let defect = (&gram - &Mat::identity(d)).max_abs();
    if defect > tol.tau_eq {
        return Err(FrameError::NotOrthonormal {
            defect,
            tol: tol.tau_eq,
        });
    }
    Ok(())
}

/// Oblique projector onto the column span of `v_basis` along the orthogonal
/// complement of the span of `w_basis`.
///
/// Both bases must be orthonormal with the same number of columns, and the
/// two spans must satisfy the complementarity condition: the matrix
/// `W* V` has to be invertible.
pub fn oblique_projector(v_basis: &Mat, w_basis: &Mat, tol: &Tol) -> Result<Mat> {
    if v_basis.rows() != w_basis.rows() || v_basis.cols() != w_basis.cols() {
        return Err(FrameError::InvalidArgument(format!(
            "subspace bases have mismatched shapes {}x{} vs {}x{}",
            v_basis.rows(),
            v_basis.cols(),
            w_basis.rows(),
            w_basis.cols()
        )));
    }
    check_orthonormal(v_basis, tol)?;
    check_orthonormal(w_basis, tol)?;
    let d = v_basis.cols();
    let cross = &w_basis.adjoint() * v_basis;
    let f = svd(&cross)?;
    let sigma_min = f.s.last().copied().unwrap_or(0.0);
    if d > 0 && f.rank(tol) < d {
        return Err(FrameError::NotComplementary { sigma_min });
    }
    let inv = pinv(&cross, tol)?;
    Ok(&(v_basis * &inv) * &w_basis.adjoint())
}

/// Append column vectors to the collection, one per step, to reach
/// `needed` extra orthonormal directions in dimension `dim`.
///
/// Each step picks the canonical basis vector with the largest residual
/// after projecting out everything collected so far; ties break toward the
/// lowest index. The choice is deterministic.
fn complete_columns(have: &[Vec<C64>], needed: usize, dim: usize) -> Vec<Vec<C64>> {
    let mut q: Vec<Vec<C64>> = have.to_vec();
    let mut out = Vec::with_capacity(needed);
    for _ in 0..needed {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for i in 0..dim {
            let mut r = vec![C64::new(0.0, 0.0); dim];
            r[i] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for u in &q {
                    let c = vdot(u, &r);
                    for (rk, uk) in r.iter_mut().zip(u) {
                        *rk -= c * uk;
                    }
                }
            }
            let nrm = vnorm(&r);
            if best.as_ref().is_none_or(|(bn, _)| nrm > *bn) {
                best = Some((nrm, r));
            }
        }
        let (nrm, mut r) = best.expect("dimension exhausted");
        debug_assert!(nrm > 0.0);
        for z in &mut r {
            *z /= C64::new(nrm, 0.0);
        }
        q.push(r.clone());
        out.push(r);
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the column span.
pub fn orthonormal_complement(basis: &Mat, tol: &Tol) -> Result<Mat> {
    check_orthonormal(basis, tol)?;
    let p = basis.rows();
    let d = basis.cols();
    let have: Vec<Vec<C64>> = (0..d).map(|j| basis.col(j)).collect();
    let extra = complete_columns(&have, p - d, p);
    if extra.is_empty() {
        Ok(Mat::zeros(p, 0))
    } else {
        Ok(Mat::from_cols(&extra))
    }
}

/// Orthonormal basis of the kernel (null space) of `a`.
pub fn kernel_basis(a: &Mat, tol: &Tol) -> Result<Mat> {
    let f = svd(a)?;
    let r = f.rank(tol);
    let row_space: Vec<Vec<C64>> = (0..r).map(|j| f.v.col(j)).collect();
    let n = a.cols();
    let extra = complete_columns(&row_space, n - r, n);
    if extra.is_empty() {
        Ok(Mat::zeros(n, 0))
    } else {
        Ok(Mat::from_cols(&extra))
    }
}

/// Gram-Schmidt with reorthogonalization. Returns an orthonormal basis of
/// the column span and its rank; columns that fall below the rank cutoff
/// are dropped.
pub fn orthonormalize(a: &Mat, tol: &Tol) -> (Mat, usize) {
    let p = a.rows();
    let scale = (0..a.cols())
        .map(|j| vnorm(&a.col(j)))
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return (Mat::zeros(p, 0), 0);
    }
    let cut = tol.rank_cutoff(scale);
    let mut q: Vec<Vec<C64>> = Vec::new();
    for j in 0..a.cols() {
        let mut v = a.col(j);
        for _ in 0..2 {
            for u in &q {
                let c = vdot(u, &v);
                for (vk, uk) in v.iter_mut().zip(u) {
                    *vk -= c * uk;
                }
            }
        }
        let nrm = vnorm(&v);
        if nrm > cut {
            for z in &mut v {
                *z /= C64::new(nrm, 0.0);
            }
            q.push(v);
        }
    }
    let rank = q.len();
    if rank == 0 {
        (Mat::zeros(p, 0), 0)
    } else {
        (Mat::from_cols(&q), rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tol() -> Tol {
        Tol::default()
    }

    /// Unitary built from two embedded rotations with phases.
    fn test_unitary() -> Mat {
        let mut q = Mat::identity(3);
        let r1 = Rot {
            c: (std::f64::consts::PI / 3.0).cos(),
            s: C64::from_polar((std::f64::consts::PI / 3.0).sin(), 0.25 * std::f64::consts::PI),
        };
        let r2 = Rot {
            c: (std::f64::consts::PI / 5.0).cos(),
            s: C64::from_polar((std::f64::consts::PI / 5.0).sin(), -std::f64::consts::PI / 7.0),
        };
        rot_cols(&mut q, 0, 1, &r1);
        rot_cols(&mut q, 1, 2, &r2);
        q
    }

    #[test]
    fn eig_two_by_two_block() {
        let s3 = 3.0f64.sqrt();
        let a = Mat::from_real_rows(&[&[1.25, s3 / 4.0], &[s3 / 4.0, 0.75]]);
        let e = eig_hermitian(&a, &tol()).unwrap();
        assert!((e.values[0] - 1.5).abs() < 1e-14);
        assert!((e.values[1] - 0.5).abs() < 1e-14);
        assert!((&e.reconstruct() - &a).max_abs() < 1e-14);
    }

    #[test]
    fn eig_complex_pauli_like() {
        let mut a = Mat::identity(2);
        a[(0, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(2.0, 0.0);
        a[(0, 1)] = c(0.0, 1.0);
        a[(1, 0)] = c(0.0, -1.0);
        let e = eig_hermitian(&a, &tol()).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_recovers_constructed_spectrum() {
        let q = test_unitary();
        let d = Mat::diag(&[5.0, 2.0, -1.0]);
        let a = &(&q * &d) * &q.adjoint();
        let e = eig_hermitian(&a, &tol()).unwrap();
        assert!((e.values[0] - 5.0).abs() < 1e-12);
        assert!((e.values[1] - 2.0).abs() < 1e-12);
        assert!((e.values[2] + 1.0).abs() < 1e-12);
        let qs = &e.vectors.adjoint() * &e.vectors;
        assert!((&qs - &Mat::identity(3)).max_abs() < 1e-13);
        assert!((&e.reconstruct() - &a).max_abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = Mat::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        match eig_hermitian(&a, &tol()) {
            Err(FrameError::NotHermitian { defect, .. }) => assert!(defect > 1.9),
            other => panic!("expected symmetry rejection, got {other:?}"),
        }
    }

    #[test]
    fn svd_projector_product() {
        // Orthogonal projector onto span{e1,e2} composed with the projector
        // onto span{e2, (e1+e3)/sqrt(2)} has singular values (1, 1/sqrt2, 0).
        let a = Mat::from_real_rows(&[&[0.5, 0.0, 0.5], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let f = svd(&a).unwrap();
        assert!((f.s[0] - 1.0).abs() < 1e-14);
        assert!((f.s[1] - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(f.s[2].abs() < 1e-14);
        assert_eq!(f.rank(&tol()), 2);
    }

    #[test]
    fn svd_reconstructs_both_orientations() {
        let a = Mat::from_fn(4, 3, |i, j| c((i * 3 + j) as f64 * 0.3 - 1.0, (i as f64) - (j as f64) * 0.7));
        for m in [a.clone(), a.adjoint()] {
            let f = svd(&m).unwrap();
            let k = m.rows().min(m.cols());
            assert_eq!(f.u.cols(), k);
            assert_eq!(f.v.cols(), k);
            assert!((&(&f.u.adjoint() * &f.u) - &Mat::identity(k)).max_abs() < 1e-13);
            assert!((&(&f.v.adjoint() * &f.v) - &Mat::identity(k)).max_abs() < 1e-13);
            let rec = &(&f.u * &Mat::diag(&f.s)) * &f.v.adjoint();
            assert!((&rec - &m).max_abs() < 1e-12);
            for w in f.s.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn pinv_matches_block_inverse() {
        let s3 = 3.0f64.sqrt();
        let a = Mat::from_real_rows(&[
            &[1.25, s3 / 4.0, 0.0],
            &[s3 / 4.0, 0.75, 0.0],
            &[0.0, 0.0, 0.0],
        ]);
        let p = pinv(&a, &tol()).unwrap();
        let expect = Mat::from_real_rows(&[
            &[1.0, -1.0 / s3, 0.0],
            &[-1.0 / s3, 5.0 / 3.0, 0.0],
            &[0.0, 0.0, 0.0],
        ]);
        assert!((&p - &expect).max_abs() < 1e-13);
        // Penrose identities.
        assert!((&(&(&a * &p) * &a) - &a).max_abs() < 1e-13);
        assert!((&(&(&p * &a) * &p) - &p).max_abs() < 1e-13);
        assert!((&a * &p).hermitian_defect() < 1e-13);
        assert!((&p * &a).hermitian_defect() < 1e-13);
    }

    #[test]
    fn oblique_projector_matches_hand_computation() {
        let h = 0.5f64.sqrt();
        let v_basis = Mat::from_real_rows(&[&[0.0, h], &[1.0, 0.0], &[0.0, h]]);
        let w_basis = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let p = oblique_projector(&v_basis, &w_basis, &tol()).unwrap();
        let expect = Mat::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
        assert!((&p - &expect).max_abs() < 1e-13);
        assert!((&(&p * &p) - &p).max_abs() < 1e-13);
    }

    #[test]
    fn oblique_projector_rejects_orthogonal_pair() {
        let v_basis = Mat::from_real_rows(&[&[1.0], &[0.0]]);
        let w_basis = Mat::from_real_rows(&[&[0.0], &[1.0]]);
        match oblique_projector(&v_basis, &w_basis, &tol()) {
            Err(FrameError::NotComplementary { sigma_min }) => assert!(sigma_min < 1e-14),
            other => panic!("expected complementarity rejection, got {other:?}"),
        }
    }

    #[test]
    fn complement_of_coordinate_plane() {
        let basis = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let comp = orthonormal_complement(&basis, &tol()).unwrap();
        assert_eq!((comp.rows(), comp.cols()), (3, 1));
        assert!((comp[(2, 0)].norm() - 1.0).abs() < 1e-15);
        assert!(comp[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = Mat::from_real_rows(&[&[1.0, 1.0]]);
        let k = kernel_basis(&a, &tol()).unwrap();
        assert_eq!((k.rows(), k.cols()), (2, 1));
        assert!(vnorm(&a.mul_vec(&k.col(0))) < 1e-14);
        assert!((vnorm(&k.col(0)) - 1.0).abs() < 1e-14);

        let b = Mat::from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]]);
        let kb = kernel_basis(&b, &tol()).unwrap();
        assert_eq!(kb.cols(), 1);
        assert!((kb[(1, 0)].norm() - 1.0).abs() < 1e-14);

        let full = Mat::identity(2);
        assert_eq!(kernel_basis(&full, &tol()).unwrap().cols(), 0);
    }

    #[test]
    fn orthonormalize_drops_dependent_columns() {
        let a = Mat::from_real_rows(&[&[1.0, 2.0, 1.0], &[0.0, 0.0, 1.0]]);
        let (q, rank) = orthonormalize(&a, &tol());
        assert_eq!(rank, 2);
        assert!((&(&q.adjoint() * &q) - &Mat::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let a = Mat::diag(&[3.0, 2.0]);
        assert!((operator_norm(&a).unwrap() - 3.0).abs() < 1e-14);
    }
}
