//! The structure of the set of oblique duals: certification, spectral
//! feasibility, Parseval duals, trace-constrained optimal duals, and a
//! seeded dual sampler.
//!
//! Every dual `G` of `F` relative to a pair `(V, W)` satisfies
//! `T_G T_F* = P` (the oblique projector onto `V` along `W_perp`), and its
//! frame operator decomposes as `S_G = S_can + B` where `S_can` is the
//! frame operator of the transported canonical dual and `B` is positive
//! semidefinite with range in `V` and rank at most `n - d`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{FrameError, Result};
use crate::frames::{Frame, SubspacePair, SUBSPACE_EQ_SINE};
use crate::linalg::{eig_hermitian, kernel_basis};
use crate::majorization::{waterfill, Spectrum};
use crate::mat::{C64, Mat};
use crate::sampling::gaussian_mat;
use crate::tol::Tol;

/// Evidence that a frame is a valid dual: the winning candidate plus the
/// measured residuals behind each structural claim.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    /// The certified dual frame, living in `V`.
    pub dual: Frame,
    /// Frobenius residual of the duality identity `T_G T_F* = P`.
    pub residual_duality: f64,
    /// The perturbation `B = S_G - S_can`, Hermitian PSD up to roundoff.
    pub b_perturbation: Mat,
    /// Smallest eigenvalue of the perturbation (at worst `-tau_eq`).
    pub b_min_eigenvalue: f64,
    /// Numerical rank of the perturbation (at most `n - d`).
    pub rank_b: usize,
}

/// Outcome of testing a candidate spectrum against the constraints that
/// characterize spectra of duals.
#[derive(Debug, Clone)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    /// The overlap parameter `m = 2d - n` that controls the upper
    /// constraints.
    pub m: i64,
    /// The reference spectrum (leading `d` eigenvalues of the transported
    /// canonical dual's frame operator).
    pub canonical_spectrum: Spectrum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    /// Zero-based position in the candidate spectrum.
    pub index: usize,
    pub kind: ViolationKind,
    /// How far past the constraint the entry sits (positive).
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Entry fell below the matching canonical eigenvalue.
    Lower,
    /// Entry exceeded the canonical eigenvalue it is pinned to when the
    /// frame is short (`m >= 1`).
    Upper,
    /// Entry past position `d` is not zero.
    TailZero,
}

/// Validate that `g` is a dual of `f` relative to `sp` and measure the
/// structure of its perturbation.
pub fn certify_dual(
    g: &Frame,
    f: &Frame,
    sp: &SubspacePair,
    tol: &Tol,
) -> Result<DualCertificate> {
    let p = sp.ambient_dim();
    if g.ambient_dim() != p || f.ambient_dim() != p {
        return Err(FrameError::InvalidArgument(
            "frames and subspaces live in different ambient dimensions".into(),
        ));
    }
    if g.len() != f.len() {
        return Err(FrameError::InvalidArgument(format!(
            "dual has {} vectors but the frame has {}",
            g.len(),
            f.len()
        )));
    }
    let product = g.synthesis() * &f.synthesis().adjoint();
    let residual = (&product - sp.projector_v_wperp()).fro_norm();
    if residual > tol.tau_eq {
        return Err(FrameError::NotADual {
            reason: "duality identity fails",
            residual,
        });
    }
    // The dual's vectors must stay inside V.
    let vb = sp.v_basis();
    let inside = vb * &(&vb.adjoint() * g.synthesis());
    let escape = (g.synthesis() - &inside).fro_norm();
    let scale = g.synthesis().fro_norm().max(1.0);
    if escape > tol.tau_eq * scale {
        return Err(FrameError::NotADual {
            reason: "dual vectors leave the target subspace",
            residual: escape,
        });
    }
    let canonical = f.canonical_v_dual(sp, tol)?;
    let b = &g.frame_operator() - &canonical.frame_operator();
    let eb = eig_hermitian(&b, tol)?;
    let b_min = eb.values.last().copied().unwrap_or(0.0);
    if b_min < -tol.tau_eq {
        return Err(FrameError::NotADual {
            reason: "perturbation has a negative direction",
            residual: -b_min,
        });
    }
    let b_scale = eb.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let rank_b = eb
        .values
        .iter()
        .filter(|&&v| v > tol.rank_cutoff(b_scale))
        .count();
    let budget = f.len() - sp.dim();
    if rank_b > budget {
        return Err(FrameError::RankBudgetExceeded {
            rank: rank_b,
            budget,
        });
    }
    Ok(DualCertificate {
        dual: g.clone(),
        residual_duality: residual,
        b_perturbation: b,
        b_min_eigenvalue: b_min,
        rank_b,
    })
}

/// Transport a classical dual (one satisfying `T_K T_F* = P_W`) into `V`
/// by applying the oblique projector to each vector.
///
/// This is the bijection between classical duals and duals in `V`; it
/// sends the canonical dual to the transported canonical dual.
pub fn lift_classical_dual(k: &Frame, f: &Frame, sp: &SubspacePair, tol: &Tol) -> Result<Frame> {
    let sine = f.span_gap(sp.w_basis())?;
    if sine > SUBSPACE_EQ_SINE {
        return Err(FrameError::SpanMismatch { sine });
    }
    let wb = sp.w_basis();
    let pw = wb * &wb.adjoint();
    let product = k.synthesis() * &f.synthesis().adjoint();
    let residual = (&product - &pw).fro_norm();
    if residual > tol.tau_eq {
        return Err(FrameError::NotADual {
            reason: "input is not a classical dual",
            residual,
        });
    }
    Frame::new(sp.projector_v_wperp() * k.synthesis(), tol)
}

/// Leading `d` eigenvalues of the transported canonical dual's frame
/// operator.
fn canonical_v_spectrum(f: &Frame, sp: &SubspacePair, tol: &Tol) -> Result<(Frame, Spectrum)> {
    let canonical = f.canonical_v_dual(sp, tol)?;
    let full = canonical.eigenlist(tol)?;
    let lead = full.values()[..sp.dim()].to_vec();
    Ok((canonical, Spectrum::new(lead)?))
}

/// Test a candidate spectrum against the constraints characterizing the
/// spectra of duals in `V`:
/// every entry dominates the matching canonical eigenvalue; when the frame
/// is short (`m = 2d - n >= 1`) the last `m` in-subspace entries are also
/// capped by the leading canonical eigenvalues; entries past `d` vanish.
pub fn check_feasible_spectrum(
    mu: &Spectrum,
    f: &Frame,
    sp: &SubspacePair,
    tol: &Tol,
) -> Result<FeasibilityVerdict> {
    let d = sp.dim();
    let n = f.len();
    let m = 2 * d as i64 - n as i64;
    let (_, lam) = canonical_v_spectrum(f, sp, tol)?;
    let mu_pad = mu.padded(d);
    let mv = mu_pad.values();
    let lv = lam.values();
    let mut violations = Vec::new();
    for i in 0..d {
        if mv[i] < lv[i] - tol.tau_eq {
            violations.push(Violation {
                index: i,
                kind: ViolationKind::Lower,
                margin: lv[i] - mv[i],
            });
        }
    }
    if m >= 1 {
        for (i, &cap) in lv.iter().enumerate().take(m as usize) {
            let idx = d - m as usize + i;
            if mv[idx] > cap + tol.tau_eq {
                violations.push(Violation {
                    index: idx,
                    kind: ViolationKind::Upper,
                    margin: mv[idx] - cap,
                });
            }
        }
    }
    for (i, &v) in mv.iter().enumerate().skip(d) {
        if v > tol.tau_eq {
            violations.push(Violation {
                index: i,
                kind: ViolationKind::TailZero,
                margin: v,
            });
        }
    }
    Ok(FeasibilityVerdict {
        feasible: violations.is_empty(),
        violations,
        m,
        canonical_spectrum: lam,
    })
}

/// Whether some dual in `V` is a Parseval frame for `V`: feasibility of
/// the all-ones spectrum.
pub fn parseval_dual_exists(f: &Frame, sp: &SubspacePair, tol: &Tol) -> Result<FeasibilityVerdict> {
    let ones = Spectrum::new(vec![1.0; sp.dim()])?;
    check_feasible_spectrum(&ones, f, sp, tol)
}

/// Add a PSD perturbation to the canonical dual's frame operator by
/// steering kernel directions: `T_G = T_can + sum_j sqrt(beta_j) u_j k_j*`
/// where `(beta_j, u_j)` are the positive eigenpairs of `b` and `k_j` are
/// orthonormal kernel vectors of the synthesis operator. The cross terms
/// vanish, so `S_G = S_can + b`.
fn lift_by_perturbation(
    f: &Frame,
    canonical: &Frame,
    b: &Mat,
    tol: &Tol,
) -> Result<Frame> {
    let eb = eig_hermitian(b, tol)?;
    let cutoff = tol.rank_cutoff(eb.values.iter().map(|v| v.abs()).fold(0.0, f64::max));
    let positive: Vec<usize> = (0..eb.values.len())
        .filter(|&i| eb.values[i] > cutoff)
        .collect();
    let kernel = kernel_basis(f.synthesis(), tol)?;
    if positive.len() > kernel.cols() {
        return Err(FrameError::RankBudgetExceeded {
            rank: positive.len(),
            budget: kernel.cols(),
        });
    }
    let p = f.ambient_dim();
    let n = f.len();
    let mut z = Mat::zeros(p, n);
    for (j, &idx) in positive.iter().enumerate() {
        let w = eb.values[idx].sqrt();
        for row in 0..p {
            let zu = eb.vectors[(row, idx)] * C64::new(w, 0.0);
            for col in 0..n {
                z[(row, col)] += zu * kernel[(col, j)].conj();
            }
        }
    }
    Frame::new(&z + canonical.synthesis(), tol)
}

/// Construct a dual that is Parseval for `V`, when one exists: perturb the
/// canonical dual by `B = P_V - S_can`.
pub fn construct_parseval_dual(
    f: &Frame,
    sp: &SubspacePair,
    tol: &Tol,
) -> Result<DualCertificate> {
    let verdict = parseval_dual_exists(f, sp, tol)?;
    if !verdict.feasible {
        return Err(FrameError::NotFeasible);
    }
    let canonical = f.canonical_v_dual(sp, tol)?;
    let vb = sp.v_basis();
    let pv = vb * &vb.adjoint();
    let b = &pv - &canonical.frame_operator();
    let g = lift_by_perturbation(f, &canonical, &b, tol)?;
    certify_dual(&g, f, sp, tol)
}

/// A trace-constrained optimal dual together with its promised spectrum.
#[derive(Debug, Clone)]
pub struct OptimalDual {
    pub certificate: DualCertificate,
    /// Spectrum of the optimum, padded with zeros to the ambient
    /// dimension. Equals the water-filling of the canonical spectrum.
    pub nu: Spectrum,
    /// The water level used by the construction.
    pub level: f64,
    /// `|| S_can B - B S_can ||_F`: the optimum shares an eigenbasis with
    /// the canonical frame operator, so this must be negligible.
    pub commutator_residual: f64,
}

/// The dual minimizing every convex potential among duals in `V` with
/// total squared norm at least `t`.
///
/// The optimum water-fills the canonical spectrum: with `m = 2d - n >= 1`
/// the top `m` eigenvalues are frozen, the rest rise to a common level,
/// and the added perturbation is diagonal in the eigenbasis of the
/// canonical frame operator. Requires `t` at least the canonical trace.
pub fn optimal_dual(f: &Frame, sp: &SubspacePair, t: f64, tol: &Tol) -> Result<OptimalDual> {
    let d = sp.dim();
    let n = f.len();
    let (canonical, lam) = canonical_v_spectrum(f, sp, tol)?;
    let tr = lam.trace();
    if t < tr - tol.tau_eq {
        return Err(FrameError::BadTrace { t, minimum: tr });
    }
    let p = sp.ambient_dim();
    if n == d {
        // No kernel, so the canonical dual is the only dual; the trace
        // budget must already be met by it.
        if t > tr + tol.tau_eq {
            return Err(FrameError::NotFeasible);
        }
        let certificate = certify_dual(&canonical, f, sp, tol)?;
        let smallest = lam.values().last().copied().unwrap_or(0.0);
        return Ok(OptimalDual {
            certificate,
            nu: lam.padded(p),
            level: smallest,
            commutator_residual: 0.0,
        });
    }
    let m = 2 * d as i64 - n as i64;
    let wf = waterfill(&lam, m, t, tol)?;
    let s_can = canonical.frame_operator();
    let es = eig_hermitian(&s_can, tol)?;
    // Eigenvalue gains aligned with the (descending) canonical eigenbasis.
    let mut b = Mat::zeros(p, p);
    for i in 0..d {
        let gain = (wf.filled[i] - lam.values()[i]).max(0.0);
        if gain == 0.0 {
            continue;
        }
        for r in 0..p {
            for c in 0..p {
                b[(r, c)] += es.vectors[(r, i)] * C64::new(gain, 0.0) * es.vectors[(c, i)].conj();
            }
        }
    }
    let g = lift_by_perturbation(f, &canonical, &b, tol)?;
    let certificate = certify_dual(&g, f, sp, tol)?;
    let bp = &certificate.b_perturbation;
    let commutator_residual = (&(&s_can * bp) - &(bp * &s_can)).fro_norm();
    Ok(OptimalDual {
        certificate,
        nu: wf.nu.padded(p),
        level: wf.level,
        commutator_residual,
    })
}

/// Seeded sample from the duals in `V`: the canonical dual plus a random
/// PSD perturbation of the requested rank and trace.
///
/// Deterministic per seed. `rank_budget` may not exceed `n - d`; budget
/// zero or zero energy returns the canonical dual itself.
pub fn random_dual(
    f: &Frame,
    sp: &SubspacePair,
    seed: u64,
    rank_budget: usize,
    energy: f64,
    tol: &Tol,
) -> Result<DualCertificate> {
    let d = sp.dim();
    let n = f.len();
    let budget = n.saturating_sub(d);
    if rank_budget > budget {
        return Err(FrameError::RankBudgetExceeded {
            rank: rank_budget,
            budget,
        });
    }
    if !energy.is_finite() || energy < 0.0 {
        return Err(FrameError::InvalidArgument(
            "perturbation energy must be finite and nonnegative".into(),
        ));
    }
    let canonical = f.canonical_v_dual(sp, tol)?;
    if rank_budget == 0 || energy == 0.0 || budget == 0 {
        return certify_dual(&canonical, f, sp, tol);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = gaussian_mat(&mut rng, d, rank_budget);
    let norm = coeffs.fro_norm();
    if norm == 0.0 {
        coeffs[(0, 0)] = C64::new(1.0, 0.0);
    }
    let scale = energy.sqrt() / coeffs.fro_norm();
    coeffs = coeffs.scale(scale);
    let kernel = kernel_basis(f.synthesis(), tol)?;
    let kr = Mat::from_fn(n, rank_budget, |i, j| kernel[(i, j)]);
    let z = &(sp.v_basis() * &coeffs) * &kr.adjoint();
    let g = Frame::new(&z + canonical.synthesis(), tol)?;
    certify_dual(&g, f, sp, tol)
}
