//! Principal angles between equal-dimensional subspaces and the rigid
//! rotations that optimize the spectrum of the canonical dual in `V`.

use crate::duality::{optimal_dual, OptimalDual};
use crate::error::{FrameError, Result};
use crate::frames::{Frame, SubspacePair, SUBSPACE_EQ_SINE};
use crate::linalg::{check_orthonormal, eig_hermitian, svd};
use crate::majorization::Spectrum;
use crate::mat::{vnorm, Mat};
use crate::tol::Tol;

/// Principal angles and principal vectors of a pair of `d`-dimensional
/// subspaces, angles nondecreasing in `[0, pi/2]`.
///
/// The columns of the two principal bases are paired: projecting the
/// `i`-th principal vector of one subspace onto the other lands on
/// `cos(theta_i)` times the `i`-th principal vector there.
#[derive(Debug, Clone)]
pub struct AngleData {
    thetas: Vec<f64>,
    cosines: Vec<f64>,
    sines: Vec<f64>,
    w_principal: Mat,
    v_principal: Mat,
}

impl AngleData {
    /// Angles in nondecreasing order.
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Cosines, nonincreasing, aligned with `thetas`.
    pub fn cosines(&self) -> &[f64] {
        &self.cosines
    }

    /// Sines, nondecreasing, aligned with `thetas`.
    pub fn sines(&self) -> &[f64] {
        &self.sines
    }

    /// Orthonormal principal vectors of `W`, one column per angle.
    pub fn w_principal(&self) -> &Mat {
        &self.w_principal
    }

    /// Orthonormal principal vectors of `V`, one column per angle.
    pub fn v_principal(&self) -> &Mat {
        &self.v_principal
    }

    /// The largest principal angle (Friedrichs angle of the pair).
    pub fn friedrichs(&self) -> f64 {
        *self.thetas.last().expect("at least one angle")
    }

    /// The smallest principal angle (Dixmier angle of the pair).
    pub fn dixmier(&self) -> f64 {
        self.thetas[0]
    }
}

/// Principal angles between the two sides of a validated pair.
pub fn principal_angles(sp: &SubspacePair, tol: &Tol) -> Result<AngleData> {
    principal_angles_between(sp.v_basis(), sp.w_basis(), tol)
}

/// Principal angles between arbitrary equal-dimensional subspaces given by
/// orthonormal bases; complementarity is not required, so angles of `pi/2`
/// can occur.
pub fn principal_angles_between(v_basis: &Mat, w_basis: &Mat, tol: &Tol) -> Result<AngleData> {
    if v_basis.cols() != w_basis.cols() {
        return Err(FrameError::RankDeficient {
            expected: w_basis.cols(),
            found: v_basis.cols(),
        });
    }
    if v_basis.rows() != w_basis.rows() {
        return Err(FrameError::InvalidArgument(
            "subspace bases live in different ambient dimensions".into(),
        ));
    }
    if v_basis.cols() == 0 {
        return Err(FrameError::InvalidArgument(
            "principal angles need at least one dimension".into(),
        ));
    }
    check_orthonormal(v_basis, tol)?;
    check_orthonormal(w_basis, tol)?;
    let d = v_basis.cols();

    // Overlap W* V: singular values are the cosines (descending), and the
    // two singular bases rotate the input bases into paired principal
    // vectors.
    let overlap = &w_basis.adjoint() * v_basis;
    let f = svd(&overlap)?;
    let w_principal = w_basis * &f.u;
    let v_principal = v_basis * &f.v;

    // Sines from the projection residual of each principal vector of V:
    // much more accurate near theta = 0 than sqrt(1 - cos^2).
    let proj = w_basis * &(&w_basis.adjoint() * &v_principal);
    let resid = &v_principal - &proj;
    let mut triples: Vec<(f64, f64, f64)> = (0..d)
        .map(|i| {
            let c = f.s[i].clamp(0.0, 1.0);
            let s = vnorm(&resid.col(i)).clamp(0.0, 1.0);
            (s.atan2(c), c, s)
        })
        .collect();
    // The SVD order already makes the angles nondecreasing up to roundoff
    // on ties; the sort enforces the invariant exactly.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| triples[a].0.total_cmp(&triples[b].0));
    let w_principal = Mat::from_cols(&order.iter().map(|&i| w_principal.col(i)).collect::<Vec<_>>());
    let v_principal = Mat::from_cols(&order.iter().map(|&i| v_principal.col(i)).collect::<Vec<_>>());
    triples = order.iter().map(|&i| triples[i]).collect();

    Ok(AngleData {
        thetas: triples.iter().map(|t| t.0).collect(),
        cosines: triples.iter().map(|t| t.1).collect(),
        sines: triples.iter().map(|t| t.2).collect(),
        w_principal,
        v_principal,
    })
}

/// Multiplicative bounds squeezing the canonical-dual spectrum.
///
/// For each `k` the product of the `k` largest canonical-dual eigenvalues
/// sits between the product of the `k` largest entries of `lower` and
/// `upper_products[k - 1]`; at `k = d` the three products coincide (a
/// determinant identity). The margins record the verified slack of each
/// inequality and are nonnegative up to roundoff.
#[derive(Debug, Clone)]
pub struct LidskiiBounds {
    /// `d` attainable lower-envelope eigenvalues, nonincreasing.
    pub lower: Spectrum,
    /// Upper bound on the product of the `k` largest dual eigenvalues,
    /// indexed by `k - 1`.
    pub upper_products: Vec<f64>,
    /// Eigenvalues of the canonical dual in `V`, zero-padded to ambient.
    pub canonical: Spectrum,
    /// `prod_k(canonical) - prod_k(lower)` for each `k`.
    pub lower_margins: Vec<f64>,
    /// `upper_products[k-1] - prod_k(canonical)` for each `k`.
    pub upper_margins: Vec<f64>,
}

fn ensure_spans_w(f: &Frame, sp: &SubspacePair) -> Result<()> {
    let sine = f.span_gap(sp.w_basis())?;
    if sine > SUBSPACE_EQ_SINE {
        return Err(FrameError::SpanMismatch { sine });
    }
    Ok(())
}

/// How strongly the relative position of `V` and `W` distorts the
/// canonical-dual spectrum: the product bound chain evaluated for `f`.
pub fn lidskii_bounds(f: &Frame, sp: &SubspacePair, tol: &Tol) -> Result<LidskiiBounds> {
    ensure_spans_w(f, sp)?;
    let d = sp.dim();
    let angles = principal_angles(sp, tol)?;
    let lam = f.eigenlist(tol)?;
    let lv = lam.values();
    let cosines = angles.cosines();

    // Lower envelope: pair the j-th smallest angle with the j-th smallest
    // positive eigenvalue and invert.
    let mut mu: Vec<f64> = (0..d)
        .map(|j| 1.0 / (lv[d - 1 - j] * cosines[j] * cosines[j]))
        .collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    let lower = Spectrum::new(mu)?;

    // Upper bound for k: the k smallest eigenvalues against the k largest
    // angles, both taken from the tail.
    let mut upper_products = Vec::with_capacity(d);
    for k in 1..=d {
        let prod: f64 = (d - k..d).map(|j| lv[j] * cosines[j] * cosines[j]).product();
        upper_products.push(1.0 / prod);
    }

    let canonical = f.canonical_v_dual(sp, tol)?.eigenlist(tol)?;
    let cv = canonical.values();
    let mut lower_margins = Vec::with_capacity(d);
    let mut upper_margins = Vec::with_capacity(d);
    let mut prod_lower = 1.0;
    let mut prod_can = 1.0;
    for k in 0..d {
        prod_lower *= lower.values()[k];
        prod_can *= cv[k];
        lower_margins.push(prod_can - prod_lower);
        upper_margins.push(upper_products[k] - prod_can);
        let scale = tol.tau_eq * prod_can.abs().max(1.0);
        if lower_margins[k] < -scale || upper_margins[k] < -scale {
            return Err(FrameError::CrossCheck {
                what: "canonical-dual product bounds",
                residual: (-lower_margins[k]).max(-upper_margins[k]),
            });
        }
    }
    Ok(LidskiiBounds {
        lower,
        upper_products,
        canonical,
        lower_margins,
        upper_margins,
    })
}

/// A rigid rotation of the ambient space that maps `W` onto itself,
/// chosen to optimize the spectrum of the rotated frame's canonical dual
/// in `V`.
#[derive(Debug, Clone)]
pub struct RotationPlan {
    /// `p x p` unitary; identity on the orthogonal complement of `W`.
    pub u: Mat,
    /// Eigenvectors of the frame operator for its `d` positive
    /// eigenvalues, descending.
    pub x_basis: Mat,
    /// Eigenvalues the rotated canonical dual attains, zero-padded.
    pub predicted_spectrum: Spectrum,
    /// Set when the frame spectrum has a repeated eigenvalue; `x_basis`
    /// is then one of several valid choices, all equally optimal.
    pub degenerate_spectrum: bool,
}

/// The rotation sending the `j`-th frame eigenvector to the principal
/// vector of `W` with the `(d - j + 1)`-th angle, so the largest frame
/// direction meets the widest angle.
///
/// Among all rotations fixing `W`, this one minimizes every convex
/// potential of the rotated canonical dual; the attained spectrum is
/// verified against `predicted_spectrum` before returning.
pub fn optimal_rotation(f: &Frame, sp: &SubspacePair, tol: &Tol) -> Result<RotationPlan> {
    ensure_spans_w(f, sp)?;
    let p = sp.ambient_dim();
    let d = sp.dim();
    let angles = principal_angles(sp, tol)?;
    let eig = eig_hermitian(&f.frame_operator(), tol)?;
    let lv = &eig.values;
    let x_basis = Mat::from_cols(&(0..d).map(|j| eig.vectors.col(j)).collect::<Vec<_>>());
    let gap_scale = tol.tau_eq * lv[0].max(1.0);
    let degenerate = (0..d.saturating_sub(1)).any(|i| lv[i] - lv[i + 1] <= gap_scale);

    // identity off W, x_j -> w_{d-j+1} on W
    let w_b = sp.w_basis();
    let mut u = &Mat::identity(p) - &(w_b * &w_b.adjoint());
    for j in 0..d {
        let wcol = angles.w_principal().col(d - 1 - j);
        let xcol = x_basis.col(j);
        for r in 0..p {
            for c in 0..p {
                u[(r, c)] += wcol[r] * xcol[c].conj();
            }
        }
    }
    let unit_resid = (&(&u.adjoint() * &u) - &Mat::identity(p)).fro_norm();
    if unit_resid > tol.tau_eq {
        return Err(FrameError::CrossCheck {
            what: "rotation unitarity",
            residual: unit_resid,
        });
    }

    let cosines = angles.cosines();
    let mut predicted: Vec<f64> = (0..d)
        .map(|j| 1.0 / (cosines[j] * cosines[j] * lv[d - 1 - j]))
        .collect();
    predicted.sort_by(|a, b| b.total_cmp(a));
    let predicted_spectrum = Spectrum::new(predicted)?.padded(p);

    let attained = f.transform(&u, tol)?.canonical_v_dual(sp, tol)?.eigenlist(tol)?;
    let resid = attained.max_abs_diff(&predicted_spectrum);
    if resid > tol.tau_eq * predicted_spectrum.values()[0].max(1.0) {
        return Err(FrameError::CrossCheck {
            what: "rotated canonical-dual spectrum",
            residual: resid,
        });
    }

    Ok(RotationPlan {
        u,
        x_basis,
        predicted_spectrum,
        degenerate_spectrum: degenerate,
    })
}

/// Optimal rotation composed with the trace-constrained optimal dual of
/// the rotated frame.
#[derive(Debug, Clone)]
pub struct CombinedOptimal {
    pub rotation: RotationPlan,
    /// Optimal dual of the rotated frame; its `nu` is the water-filling
    /// of the rotated canonical spectrum.
    pub dual: OptimalDual,
}

/// Rotate first, then water-fill: the resulting dual minimizes every
/// convex potential over all rotations of the frame and all duals with
/// total squared norm at least `t`.
///
/// Proven only when the frame has at least `2d` vectors; shorter frames
/// are rejected with `ConjectureRegime` rather than silently trusting the
/// unproven case.
pub fn combined_optimal(f: &Frame, sp: &SubspacePair, t: f64, tol: &Tol) -> Result<CombinedOptimal> {
    let two_d = 2 * sp.dim();
    if f.len() < two_d {
        return Err(FrameError::ConjectureRegime { n: f.len(), two_d });
    }
    let rotation = optimal_rotation(f, sp, tol)?;
    let rotated = f.transform(&rotation.u, tol)?;
    let dual = optimal_dual(&rotated, sp, t, tol)?;
    Ok(CombinedOptimal { rotation, dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::certify_dual;
    use crate::linalg::operator_norm;
    use crate::majorization::{log_majorizes, majorizes, potential, waterfill, PotentialSpec};
    use crate::mat::{vdot, C64};
    use crate::sampling::{
        random_complementary_pair, random_frame_in, random_w_preserving_unitary,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SQ2: f64 = std::f64::consts::SQRT_2;

    fn tol() -> Tol {
        Tol::default()
    }

    /// W = span{e1, e2}, V = span{e2, (e1 + e3)/sqrt(2)} in C^3.
    fn example_pair() -> SubspacePair {
        let w = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let v = Mat::from_real_rows(&[&[0.0, 1.0 / SQ2], &[1.0, 0.0], &[0.0, 1.0 / SQ2]]);
        SubspacePair::new(v, w, &tol()).unwrap()
    }

    /// Two unit vectors at angles 0 and pi/3 in the plane of C^3.
    fn example_frame() -> Frame {
        let half = 0.5;
        let s3 = 3.0f64.sqrt() / 2.0;
        Frame::new(
            Mat::from_real_rows(&[&[1.0, half], &[0.0, s3], &[0.0, 0.0]]),
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn coincident_pair_has_zero_angles() {
        let w = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let sp = SubspacePair::coincident(w, &tol()).unwrap();
        let a = principal_angles(&sp, &tol()).unwrap();
        assert!(a.thetas().iter().all(|&t| t.abs() <= 1e-12));
        assert!(a.friedrichs().abs() <= 1e-12);
        // With identical bases the principal vectors agree columnwise.
        for i in 0..2 {
            let w_i = a.w_principal().col(i);
            let v_i = a.v_principal().col(i);
            let diff: f64 = w_i
                .iter()
                .zip(&v_i)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff <= 1e-10);
        }
    }

    #[test]
    fn example_pair_angles_are_zero_and_quarter_pi() {
        let sp = example_pair();
        let a = principal_angles(&sp, &tol()).unwrap();
        assert!((a.thetas()[0] - 0.0).abs() <= 1e-12);
        assert!((a.thetas()[1] - std::f64::consts::FRAC_PI_4).abs() <= 1e-12);
        assert!((a.dixmier() - 0.0).abs() <= 1e-12);
        assert!((a.friedrichs() - std::f64::consts::FRAC_PI_4).abs() <= 1e-12);
        // The shared direction e2 carries the zero angle, up to phase.
        let w0 = a.w_principal().col(0);
        let e2 = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!((vdot(&e2, &w0).norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn orthogonal_subspaces_reach_right_angles() {
        let w = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0]]);
        let v = Mat::from_real_rows(&[&[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let a = principal_angles_between(&v, &w, &tol()).unwrap();
        for &t in a.thetas() {
            assert!((t - std::f64::consts::FRAC_PI_2).abs() <= 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let w = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let v = Mat::from_real_rows(&[&[0.0], &[1.0], &[0.0]]);
        match principal_angles_between(&v, &w, &tol()) {
            Err(FrameError::RankDeficient { expected: 2, found: 1 }) => {}
            other => panic!("expected rank mismatch, got {other:?}"),
        }
    }

    #[test]
    fn pairing_convention_holds_on_random_pairs() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let sp = random_complementary_pair(&mut rng, 7, 3, 0.3, &t).unwrap();
            let a = principal_angles(&sp, &t).unwrap();
            let w_b = sp.w_basis();
            let v_b = sp.v_basis();
            let p_w = w_b * &w_b.adjoint();
            let p_v = v_b * &v_b.adjoint();
            for i in 0..3 {
                let v_i = a.v_principal().col(i);
                let w_i = a.w_principal().col(i);
                let c = a.cosines()[i];
                let pv = p_w.mul_vec(&v_i);
                let pw = p_v.mul_vec(&w_i);
                let r1: f64 = pv
                    .iter()
                    .zip(&w_i)
                    .map(|(x, y)| (x - y * C64::new(c, 0.0)).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                let r2: f64 = pw
                    .iter()
                    .zip(&v_i)
                    .map(|(x, y)| (x - y * C64::new(c, 0.0)).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(r1 <= 1e-8 && r2 <= 1e-8, "pairing residuals {r1} {r2}");
            }
            // sin^2 + cos^2 = 1 ties the two independent computations.
            for i in 0..3 {
                let s = a.sines()[i];
                let c = a.cosines()[i];
                assert!((s * s + c * c - 1.0).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn angle_cosines_match_projector_product_singular_values() {
        let sp = example_pair();
        let a = principal_angles(&sp, &tol()).unwrap();
        let w_b = sp.w_basis();
        let v_b = sp.v_basis();
        let prod = &(w_b * &w_b.adjoint()) * &(v_b * &v_b.adjoint());
        let f = svd(&prod).unwrap();
        assert!((f.s[0] - 1.0).abs() <= 1e-10);
        assert!((f.s[1] - 1.0 / SQ2).abs() <= 1e-10);
        assert!(f.s[2].abs() <= 1e-10);
        assert!((f.s[0] - a.cosines()[0]).abs() <= 1e-10);
        assert!((f.s[1] - a.cosines()[1]).abs() <= 1e-10);
    }

    #[test]
    fn oblique_projector_singular_values_are_reciprocal_cosines() {
        let t = tol();
        let sp = example_pair();
        let a = principal_angles(&sp, &t).unwrap();
        let f = svd(sp.projector_v_wperp()).unwrap();
        // 1/cos = (sqrt(2), 1) descending, then a zero.
        assert!((f.s[0] - SQ2).abs() <= 1e-10);
        assert!((f.s[1] - 1.0).abs() <= 1e-10);
        assert!(f.s[2].abs() <= 1e-10);
        // Friedrichs angle controls the projector norm.
        let nrm = operator_norm(sp.projector_v_wperp()).unwrap();
        assert!((nrm - 1.0 / a.friedrichs().cos()).abs() <= 1e-10);
        // Dixmier angle controls |P_V P_W|.
        let w_b = sp.w_basis();
        let v_b = sp.v_basis();
        let prod = &(v_b * &v_b.adjoint()) * &(w_b * &w_b.adjoint());
        let nrm2 = operator_norm(&prod).unwrap();
        assert!((nrm2 - a.dixmier().cos()).abs() <= 1e-10);
    }

    #[test]
    fn friedrichs_and_dixmier_identities_hold_on_random_pairs() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let sp = random_complementary_pair(&mut rng, 8, 3, 0.3, &t).unwrap();
            let a = principal_angles(&sp, &t).unwrap();
            let nrm = operator_norm(sp.projector_v_wperp()).unwrap();
            assert!((nrm - 1.0 / a.friedrichs().cos()).abs() <= 1e-8);
            let w_b = sp.w_basis();
            let v_b = sp.v_basis();
            let prod = &(v_b * &v_b.adjoint()) * &(w_b * &w_b.adjoint());
            let nrm2 = operator_norm(&prod).unwrap();
            assert!((nrm2 - a.dixmier().cos()).abs() <= 1e-8);
        }
    }

    #[test]
    fn product_bounds_on_the_worked_example() {
        let t = tol();
        let b = lidskii_bounds(&example_frame(), &example_pair(), &t).unwrap();
        assert!((b.lower.values()[0] - 2.0).abs() <= 1e-10);
        assert!((b.lower.values()[1] - 4.0 / 3.0).abs() <= 1e-10);
        assert!((b.upper_products[0] - 4.0).abs() <= 1e-10);
        assert!((b.upper_products[1] - 8.0 / 3.0).abs() <= 1e-10);
        assert!((b.canonical.values()[0] - 8.0 / 3.0).abs() <= 1e-9);
        assert!((b.canonical.values()[1] - 1.0).abs() <= 1e-9);
        for k in 0..2 {
            assert!(b.lower_margins[k] >= -1e-8);
            assert!(b.upper_margins[k] >= -1e-8);
        }
        // Products close at k = d: canonical product = upper bound = 8/3.
        assert!(b.upper_margins[1].abs() <= 1e-8);
    }

    #[test]
    fn product_bounds_collapse_for_parseval_coincident() {
        let t = tol();
        let w = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let sp = SubspacePair::coincident(w.clone(), &t).unwrap();
        let f = Frame::new(w, &t).unwrap();
        let b = lidskii_bounds(&f, &sp, &t).unwrap();
        for k in 0..2 {
            assert!((b.lower.values()[k] - 1.0).abs() <= 1e-10);
            assert!((b.upper_products[k] - 1.0).abs() <= 1e-10);
            assert!((b.canonical.values()[k] - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn product_bounds_hold_on_random_instances() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let sp = random_complementary_pair(&mut rng, 6, 2, 0.3, &t).unwrap();
            let f = random_frame_in(&mut rng, sp.w_basis(), 4, &t).unwrap();
            let b = lidskii_bounds(&f, &sp, &t).unwrap();
            let scale = b.canonical.values()[0].max(1.0) * 1e-8;
            for k in 0..2 {
                assert!(b.lower_margins[k] >= -scale);
                assert!(b.upper_margins[k] >= -scale);
            }
            // Determinant identity at k = d.
            let prod_can: f64 = b.canonical.values()[..2].iter().product();
            assert!((b.upper_products[1] - prod_can).abs() <= 1e-6 * prod_can.max(1.0));
        }
    }

    #[test]
    fn rotation_on_the_worked_example_attains_the_lower_envelope() {
        let t = tol();
        let f = example_frame();
        let sp = example_pair();
        let plan = optimal_rotation(&f, &sp, &t).unwrap();
        let pv = plan.predicted_spectrum.values();
        assert!((pv[0] - 2.0).abs() <= 1e-10);
        assert!((pv[1] - 4.0 / 3.0).abs() <= 1e-10);
        assert!(pv[2].abs() <= 1e-12);
        assert!((plan.predicted_spectrum.trace() - 10.0 / 3.0).abs() <= 1e-10);
        assert!(!plan.degenerate_spectrum);

        // The rotation shrinks the canonical-dual trace: 10/3 < 11/3.
        let can = f.canonical_v_dual(&sp, &t).unwrap().eigenlist(&t).unwrap();
        assert!((can.trace() - 11.0 / 3.0).abs() <= 1e-9);
        assert!(plan.predicted_spectrum.trace() < can.trace());

        // U is unitary and maps W onto W.
        let p = sp.ambient_dim();
        let resid = (&(&plan.u.adjoint() * &plan.u) - &Mat::identity(p)).fro_norm();
        assert!(resid <= 1e-10);
        let w_b = sp.w_basis();
        let moved = &plan.u * w_b;
        let out = &moved - &(w_b * &(&w_b.adjoint() * &moved));
        assert!(operator_norm(&out).unwrap() <= 1e-10);

        // Attained spectrum matches the prediction.
        let got = f
            .transform(&plan.u, &t)
            .unwrap()
            .canonical_v_dual(&sp, &t)
            .unwrap()
            .eigenlist(&t)
            .unwrap();
        assert!(got.max_abs_diff(&plan.predicted_spectrum) <= 1e-9);
    }

    #[test]
    fn rotation_for_coincident_pair_predicts_canonical_dual() {
        let t = tol();
        let w = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let sp = SubspacePair::coincident(w, &t).unwrap();
        let f = example_frame();
        let plan = optimal_rotation(&f, &sp, &t).unwrap();
        // All angles vanish, so the prediction is the reversed reciprocal
        // spectrum (2, 2/3, 0) = eigenlist of the plain canonical dual.
        let can = f.canonical_dual(&t).unwrap().eigenlist(&t).unwrap();
        assert!(plan.predicted_spectrum.max_abs_diff(&can) <= 1e-9);
    }

    #[test]
    fn repeated_frame_eigenvalues_are_flagged() {
        let t = tol();
        let w = Mat::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let sp = SubspacePair::coincident(w.clone(), &t).unwrap();
        let f = Frame::new(w, &t).unwrap();
        let plan = optimal_rotation(&f, &sp, &t).unwrap();
        assert!(plan.degenerate_spectrum);
    }

    #[test]
    fn rotation_beats_sampled_rotations_under_the_frame_potential() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let sp = random_complementary_pair(&mut rng, 6, 2, 0.3, &t).unwrap();
        let f = random_frame_in(&mut rng, sp.w_basis(), 4, &t).unwrap();
        let plan = optimal_rotation(&f, &sp, &t).unwrap();
        let d = sp.dim();
        let best = potential(&PotentialSpec::FramePotential, &plan.predicted_spectrum, d).unwrap();
        let top_best =
            Spectrum::new(plan.predicted_spectrum.values()[..d].to_vec()).unwrap();
        for _ in 0..10 {
            let u = random_w_preserving_unitary(&mut rng, sp.w_basis(), &t).unwrap();
            let spec = f
                .transform(&u, &t)
                .unwrap()
                .canonical_v_dual(&sp, &t)
                .unwrap()
                .eigenlist(&t)
                .unwrap();
            let val = potential(&PotentialSpec::FramePotential, &spec, d).unwrap();
            assert!(best <= val + 1e-8, "potential {best} > sampled {val}");
            // The optimum log-majorizes every sampled spectrum from below;
            // total products agree by the determinant identity.
            let top = Spectrum::new(spec.values()[..d].to_vec()).unwrap();
            assert!(log_majorizes(&top, &top_best, &t));
        }
    }

    #[test]
    fn combined_rejects_short_frames() {
        let t = tol();
        match combined_optimal(&example_frame(), &example_pair(), 4.0, &t) {
            Err(FrameError::ConjectureRegime { n: 2, two_d: 4 }) => {}
            other => panic!("expected conjecture-regime rejection, got {other:?}"),
        }
    }

    #[test]
    fn combined_optimal_waterfills_the_rotated_spectrum() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let sp = random_complementary_pair(&mut rng, 6, 2, 0.3, &t).unwrap();
        let f = random_frame_in(&mut rng, sp.w_basis(), 5, &t).unwrap();
        let d = sp.dim();

        // Sampled rotations need more trace than the optimal one; pick a
        // target feasible for every competitor.
        let competitors: Vec<Spectrum> = (0..5)
            .map(|_| {
                let u = random_w_preserving_unitary(&mut rng, sp.w_basis(), &t).unwrap();
                let spec = f
                    .transform(&u, &t)
                    .unwrap()
                    .canonical_v_dual(&sp, &t)
                    .unwrap()
                    .eigenlist(&t)
                    .unwrap();
                Spectrum::new(spec.values()[..d].to_vec()).unwrap()
            })
            .collect();
        let target = competitors
            .iter()
            .map(Spectrum::trace)
            .fold(0.0f64, f64::max)
            + 0.8;

        let combo = combined_optimal(&f, &sp, target, &t).unwrap();
        assert!((combo.dual.nu.trace() - target).abs() <= 1e-8);
        let rotated = f.transform(&combo.rotation.u, &t).unwrap();
        certify_dual(&combo.dual.certificate.dual, &rotated, &sp, &t).unwrap();

        // Rotating first gives the flattest water-filled spectrum: other
        // rotations water-fill to something that majorizes it.
        let m = 2 * d as i64 - f.len() as i64;
        for lam in &competitors {
            let nu_u = waterfill(lam, m, target, &t).unwrap().nu.padded(6);
            assert!(majorizes(&nu_u, &combo.dual.nu, &t));
        }
    }

    #[test]
    fn combined_at_minimal_trace_is_the_rotated_canonical_dual() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let sp = random_complementary_pair(&mut rng, 5, 2, 0.3, &t).unwrap();
        let f = random_frame_in(&mut rng, sp.w_basis(), 4, &t).unwrap();
        let predicted = optimal_rotation(&f, &sp, &t).unwrap().predicted_spectrum;
        let combo = combined_optimal(&f, &sp, predicted.trace(), &t).unwrap();
        assert!(combo.dual.nu.max_abs_diff(&predicted) <= 1e-8);
    }
}
