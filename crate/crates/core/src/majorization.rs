//! Vector orders on nonincreasing nonnegative spectra, convex potentials,
//! and the water-filling construction.

use crate::error::{FrameError, Result};
use crate::tol::Tol;

/// Entries in `[-CLAMP, 0)` are treated as roundoff and clamped to zero.
const CLAMP: f64 = 1e-12;

/// A finite list of nonnegative reals in nonincreasing order.
///
/// The constructor sorts its input descending and clamps tiny negative
/// entries (roundoff from eigensolvers) to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(FrameError::InvalidSpectrum(format!(
                    "entry {i} is not finite"
                )));
            }
            if *v < 0.0 {
                if *v >= -CLAMP {
                    *v = 0.0;
                } else {
                    return Err(FrameError::InvalidSpectrum(format!(
                        "entry {i} is negative ({v:.3e})"
                    )));
                }
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Copy extended with zeros to length `n` (a no-op if already longer).
    pub fn padded(&self, n: usize) -> Spectrum {
        let mut v = self.values.clone();
        if v.len() < n {
            v.resize(n, 0.0);
        }
        Spectrum { values: v }
    }

    /// Largest entrywise difference after zero-padding to a common length.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        let n = self.len().max(other.len());
        let a = self.padded(n);
        let b = other.padded(n);
        a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

fn padded_pair(a: &Spectrum, b: &Spectrum) -> (Vec<f64>, Vec<f64>) {
    let n = a.len().max(b.len());
    (
        a.padded(n).values,
        b.padded(n).values,
    )
}

/// True iff `x` is submajorized by `y`: every partial sum of `x` is at most
/// the matching partial sum of `y`, within additive slack `tol.tau_eq`.
pub fn submajorizes(y: &Spectrum, x: &Spectrum, tol: &Tol) -> bool {
    let (ys, xs) = padded_pair(y, x);
    let mut sx = 0.0;
    let mut sy = 0.0;
    for (xv, yv) in xs.iter().zip(&ys) {
        sx += xv;
        sy += yv;
        if sx > sy + tol.tau_eq {
            return false;
        }
    }
    true
}

/// True iff `x` is majorized by `y`: submajorization plus equal traces.
pub fn majorizes(y: &Spectrum, x: &Spectrum, tol: &Tol) -> bool {
    submajorizes(y, x, tol) && (x.trace() - y.trace()).abs() <= tol.tau_eq
}

/// Zero count and log-sum of the positive entries of each prefix.
fn log_prefixes(v: &[f64]) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(v.len());
    let mut zeros = 0usize;
    let mut logsum = 0.0f64;
    for &x in v {
        if x == 0.0 {
            zeros += 1;
        } else {
            logsum += x.ln();
        }
        out.push((zeros, logsum));
    }
    out
}

/// Partial-product comparison of `x` against `y` in log space.
///
/// Returns `(weak, strict)`: `weak` holds iff every partial product of `x`
/// is at most the matching one of `y`; `strict` additionally requires the
/// total products to agree within relative slack. A zero on the `y` side
/// forces the product of `x` to be zero from that index on.
fn log_compare(y: &Spectrum, x: &Spectrum, tol: &Tol) -> (bool, bool) {
    let (ys, xs) = padded_pair(y, x);
    if xs.is_empty() {
        return (true, true);
    }
    let px = log_prefixes(&xs);
    let py = log_prefixes(&ys);
    let n = xs.len();
    let mut weak = true;
    for k in 0..n {
        let (zx, lx) = px[k];
        let (zy, ly) = py[k];
        let ok = if zy > 0 {
            zx > 0
        } else if zx > 0 {
            true
        } else {
            lx <= ly + tol.tau_eq
        };
        if !ok {
            weak = false;
            break;
        }
    }
    let (zx, lx) = px[n - 1];
    let (zy, ly) = py[n - 1];
    let total_equal = if zx > 0 || zy > 0 {
        zx > 0 && zy > 0
    } else {
        (lx - ly).abs() <= tol.tau_eq
    };
    (weak, weak && total_equal)
}

/// True iff `x` is log-majorized by `y`: partial products of `x` at most
/// those of `y`, with equal total products (relative slack `tol.tau_eq`).
pub fn log_majorizes(y: &Spectrum, x: &Spectrum, tol: &Tol) -> bool {
    log_compare(y, x, tol).1
}

/// Weak form: all partial products of `x` at most those of `y`, the total
/// included, with no equality requirement.
pub fn log_submajorizes(y: &Spectrum, x: &Spectrum, tol: &Tol) -> bool {
    log_compare(y, x, tol).0
}

/// True iff `x <= y` entrywise (both already sorted), with additive slack.
pub fn le_pointwise(x: &Spectrum, y: &Spectrum, tol: &Tol) -> bool {
    let (ys, xs) = padded_pair(y, x);
    xs.iter().zip(&ys).all(|(xv, yv)| *xv <= *yv + tol.tau_eq)
}

/// Joint evaluation of the order relations between `x` and `y`, with `x` on
/// the dominated side throughout.
///
/// The implication chain `pointwise => weak log-majorization => weak
/// majorization` holds for any pair of nonnegative nonincreasing vectors;
/// `chain_ok` records whether this run respected it. The strict
/// log-majorization flag is reported alongside but sits outside the chain,
/// because it demands equal total products, which pointwise domination does
/// not imply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderChainReport {
    pub pointwise: bool,
    pub weak_log: bool,
    pub strict_log: bool,
    pub weak: bool,
    pub chain_ok: bool,
}

pub fn order_chain_check(x: &Spectrum, y: &Spectrum, tol: &Tol) -> OrderChainReport {
    let pointwise = le_pointwise(x, y, tol);
    let (weak_log, strict_log) = log_compare(y, x, tol);
    let weak = submajorizes(y, x, tol);
    let chain_ok = (!pointwise || weak_log) && (!weak_log || weak);
    OrderChainReport {
        pointwise,
        weak_log,
        strict_log,
        weak,
        chain_ok,
    }
}

/// Convex scalar potential applied entrywise and summed.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// `h(x) = x^2`; the sum over a frame operator spectrum is the frame
    /// potential.
    FramePotential,
    /// `h(x) = 1/x`; the sum is the mean squared reconstruction error.
    /// Defined only on strictly positive entries.
    Mse,
    /// `h(x) = x^q` with `q >= 1`.
    Power(f64),
    /// `h(x) = sum_k max(x - b_k, 0)`: a sum of hinge functions, one per
    /// breakpoint. Convex and nondecreasing on `[0, inf)`.
    PiecewiseLinear(Vec<f64>),
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::FramePotential | PotentialSpec::Mse => Ok(()),
            PotentialSpec::Power(q) => {
                if q.is_finite() && *q >= 1.0 {
                    Ok(())
                } else {
                    Err(FrameError::BadPotential)
                }
            }
            PotentialSpec::PiecewiseLinear(bs) => {
                if bs.iter().all(|b| b.is_finite()) {
                    Ok(())
                } else {
                    Err(FrameError::BadPotential)
                }
            }
        }
    }

    pub fn requires_positive(&self) -> bool {
        matches!(self, PotentialSpec::Mse)
    }

    /// Whether `h` is nondecreasing on the nonnegative axis. Monotone
    /// potentials respect submajorization; the others only respect
    /// majorization.
    pub fn is_nondecreasing(&self) -> bool {
        !matches!(self, PotentialSpec::Mse)
    }

    /// Whether `h(0) = 0`, so structural zeros contribute nothing to the
    /// sum. Required wherever `h` is traced over an operator with a
    /// nontrivial kernel.
    pub fn vanishes_at_zero(&self) -> bool {
        match self {
            PotentialSpec::FramePotential | PotentialSpec::Power(_) => true,
            PotentialSpec::Mse => false,
            PotentialSpec::PiecewiseLinear(bs) => bs.iter().all(|&b| b >= 0.0),
        }
    }

    fn h(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::FramePotential => x * x,
            PotentialSpec::Mse => 1.0 / x,
            PotentialSpec::Power(q) => x.powf(*q),
            PotentialSpec::PiecewiseLinear(bs) => {
                bs.iter().map(|b| (x - b).max(0.0)).sum()
            }
        }
    }
}

/// Sum of `h` over the leading `d` entries of `s`.
///
/// `d` is the dimension of the subspace the operator was compressed to;
/// entries past `d` are structural zeros and excluded.
pub fn potential(spec: &PotentialSpec, s: &Spectrum, d: usize) -> Result<f64> {
    spec.validate()?;
    let padded = s.padded(d);
    let lead = &padded.values()[..d];
    if spec.requires_positive() {
        for (i, &x) in lead.iter().enumerate() {
            if x <= 0.0 {
                return Err(FrameError::NonPositiveEigenvalue { index: i, value: x });
            }
        }
    }
    Ok(lead.iter().map(|&x| spec.h(x)).sum())
}

/// Result of water-filling a spectrum up to total trace `t`.
#[derive(Debug, Clone)]
pub struct Waterfill {
    /// The filled values in nonincreasing order.
    pub nu: Spectrum,
    /// The water level `c`.
    pub level: f64,
    /// The filled values aligned with the input indices (the first
    /// `max(m, 0)` entries frozen, the rest raised to at least `level`).
    /// With `m >= 1` and a high level this list need not be sorted.
    pub filled: Vec<f64>,
}

/// Raise the tail of `lam` to a common level so the total reaches `t`.
///
/// The first `max(m, 0)` entries are frozen; each remaining entry `lam_i`
/// becomes `max(lam_i, c)` where the level `c` is the unique solution of
/// `sum (c - lam_i)+ = t - tr lam` over the unfrozen block. The level is
/// found exactly by sorting the breakpoints and solving the piecewise
/// linear equation on the active segment; no iterative root finder is
/// involved. When `t = tr lam` the convention is `c = lam_d` (the smallest
/// entry) and the spectrum is returned unchanged.
pub fn waterfill(lam: &Spectrum, m: i64, t: f64, tol: &Tol) -> Result<Waterfill> {
    let d = lam.len();
    if m >= d as i64 {
        return Err(FrameError::BadM { m, d });
    }
    let tr = lam.trace();
    if t < tr - tol.tau_eq {
        return Err(FrameError::BadTrace { t, minimum: tr });
    }
    if d == 0 {
        return Ok(Waterfill {
            nu: Spectrum::new(vec![])?,
            level: 0.0,
            filled: vec![],
        });
    }
    let vals = lam.values();
    let frozen = m.max(0) as usize;
    let excess = (t - tr).max(0.0);
    let active = &vals[frozen..];
    let level = if excess == 0.0 {
        vals[d - 1]
    } else {
        let mut asc: Vec<f64> = active.to_vec();
        asc.sort_by(|a, b| a.total_cmp(b));
        let k_total = asc.len();
        let mut prefix = 0.0;
        let mut level = f64::NAN;
        for j in 1..=k_total {
            prefix += asc[j - 1];
            let c_try = (excess + prefix) / j as f64;
            if j == k_total || c_try <= asc[j] {
                level = c_try;
                break;
            }
        }
        debug_assert!(level.is_finite());
        level
    };
    let mut filled: Vec<f64> = vals
        .iter()
        .enumerate()
        .map(|(i, &x)| if i < frozen { x } else { x.max(level) })
        .collect();
    // Land the trace on t exactly; the residual is solver roundoff.
    let slack = t - filled.iter().sum::<f64>();
    debug_assert!(slack.abs() <= tol.tau_eq);
    filled[d - 1] += slack;
    let nu = Spectrum::new(filled.clone())?;
    Ok(Waterfill { nu, level, filled })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn spectrum_sorts_and_clamps() {
        let s = sp(&[0.5, 2.0, -1e-14, 1.0]);
        assert_eq!(s.values(), &[2.0, 1.0, 0.5, 0.0]);
        assert!(Spectrum::new(vec![1.0, -1e-3]).is_err());
        assert!(Spectrum::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn submajorization_classics() {
        let t = tol();
        assert!(submajorizes(&sp(&[2.0, 0.0]), &sp(&[1.0, 1.0]), &t));
        assert!(majorizes(&sp(&[2.0, 0.0]), &sp(&[1.0, 1.0]), &t));
        assert!(!submajorizes(&sp(&[1.0, 1.0]), &sp(&[2.0, 0.0]), &t));
        let s = sp(&[1.3, 0.4]);
        assert!(submajorizes(&s, &s, &t));
        // Unequal lengths zero-pad.
        assert!(submajorizes(&sp(&[2.0]), &sp(&[1.0, 1.0]), &t));
        assert!(!majorizes(&sp(&[2.0, 0.0]), &sp(&[1.0, 0.5]), &t));
    }

    #[test]
    fn uniform_is_majorized_by_anything_with_equal_trace() {
        let t = tol();
        let y = sp(&[2.7, 0.2, 0.1]);
        let x = sp(&[1.0, 1.0, 1.0]);
        assert!(majorizes(&y, &x, &t));
    }

    #[test]
    fn log_majorization_examples() {
        let t = tol();
        assert!(log_majorizes(&sp(&[4.0, 1.0]), &sp(&[2.0, 2.0]), &t));
        assert!(!log_majorizes(&sp(&[2.0, 2.0]), &sp(&[4.0, 1.0]), &t));
        let s = sp(&[3.0, 0.5]);
        assert!(log_majorizes(&s, &s, &t));
        // Equal totals required for the strict form.
        assert!(!log_majorizes(&sp(&[2.0, 1.0]), &sp(&[1.0, 1.0]), &t));
        assert!(log_submajorizes(&sp(&[2.0, 1.0]), &sp(&[1.0, 1.0]), &t));
        // A zero on the dominating side forces the products to zero.
        assert!(!log_submajorizes(&sp(&[2.0, 0.0]), &sp(&[1.0, 1.0]), &t));
        // Zeros on both sides: totals agree at zero.
        assert!(log_majorizes(&sp(&[1.0, 0.0]), &sp(&[0.5, 0.0]), &t));
        assert!(!log_majorizes(&sp(&[1.0, 1.0]), &sp(&[2.0, 0.0]), &t));
    }

    #[test]
    fn order_chain_examples() {
        let t = tol();
        let r = order_chain_check(&sp(&[1.0, 2.0]), &sp(&[2.0, 3.0]), &t);
        assert!(r.pointwise && r.weak_log && r.weak && r.chain_ok);

        let r = order_chain_check(&sp(&[2.0, 2.0]), &sp(&[4.0, 1.0]), &t);
        assert!(!r.pointwise && r.weak_log && r.strict_log && r.weak && r.chain_ok);

        let r = order_chain_check(&sp(&[5.0, 0.0]), &sp(&[4.0, 1.0]), &t);
        assert!(!r.weak_log && !r.weak && r.chain_ok);
    }

    #[test]
    fn potentials_on_reference_spectra() {
        let t2 = sp(&[1.5, 0.5]);
        let fp = potential(&PotentialSpec::FramePotential, &t2, 2).unwrap();
        assert!((fp - 2.5).abs() < 1e-15);
        let mse = potential(&PotentialSpec::Mse, &sp(&[1.0, 1.0]), 2).unwrap();
        assert!((mse - 2.0).abs() < 1e-15);
        let p1 = potential(&PotentialSpec::Power(1.0), &t2, 2).unwrap();
        assert!((p1 - t2.trace()).abs() < 1e-15);
        let pl = potential(&PotentialSpec::PiecewiseLinear(vec![1.0]), &sp(&[2.0, 0.5]), 2).unwrap();
        assert!((pl - 1.0).abs() < 1e-15);
    }

    #[test]
    fn potential_rejections() {
        match potential(&PotentialSpec::Mse, &sp(&[1.0, 0.0]), 2) {
            Err(FrameError::NonPositiveEigenvalue { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected positivity rejection, got {other:?}"),
        }
        assert!(matches!(
            potential(&PotentialSpec::Power(0.5), &sp(&[1.0]), 1),
            Err(FrameError::BadPotential)
        ));
    }

    #[test]
    fn waterfill_flat_fill() {
        let w = waterfill(&sp(&[2.0, 1.0]), 0, 5.0, &tol()).unwrap();
        assert!((w.level - 2.5).abs() < 1e-14);
        assert_eq!(w.nu.values(), &[2.5, 2.5]);
        assert!((w.nu.trace() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn waterfill_at_minimum_trace_is_identity() {
        let w = waterfill(&sp(&[2.0, 1.0]), 0, 3.0, &tol()).unwrap();
        assert_eq!(w.level, 1.0);
        assert_eq!(w.nu.values(), &[2.0, 1.0]);
    }

    #[test]
    fn waterfill_with_frozen_head() {
        let w = waterfill(&sp(&[3.0, 1.0, 1.0]), 1, 6.0, &tol()).unwrap();
        assert!((w.level - 1.5).abs() < 1e-14);
        assert_eq!(w.nu.values(), &[3.0, 1.5, 1.5]);
        assert_eq!(w.filled, vec![3.0, 1.5, 1.5]);
    }

    #[test]
    fn waterfill_level_can_pass_frozen_entries() {
        let w = waterfill(&sp(&[3.0, 1.0, 1.0]), 1, 20.0, &tol()).unwrap();
        assert!((w.level - 8.5).abs() < 1e-13);
        assert_eq!(w.filled, vec![3.0, 8.5, 8.5]);
        // Sorted view puts the frozen entry last.
        assert_eq!(w.nu.values(), &[8.5, 8.5, 3.0]);
        assert!((w.nu.trace() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn waterfill_negative_m_matches_zero() {
        let a = waterfill(&sp(&[2.0, 1.0]), -5, 5.0, &tol()).unwrap();
        let b = waterfill(&sp(&[2.0, 1.0]), 0, 5.0, &tol()).unwrap();
        assert_eq!(a.nu.values(), b.nu.values());
        assert_eq!(a.level, b.level);
    }

    #[test]
    fn waterfill_rejections() {
        assert!(matches!(
            waterfill(&sp(&[2.0, 1.0]), 2, 5.0, &tol()),
            Err(FrameError::BadM { m: 2, d: 2 })
        ));
        assert!(matches!(
            waterfill(&sp(&[2.0, 1.0]), 0, 1.0, &tol()),
            Err(FrameError::BadTrace { .. })
        ));
    }

    #[test]
    fn waterfill_comparison_concrete() {
        let t = tol();
        let nl = waterfill(&sp(&[1.0, 0.0]), 0, 3.0, &t).unwrap();
        let nm = waterfill(&sp(&[2.0, 0.0]), 0, 3.0, &t).unwrap();
        assert_eq!(nl.nu.values(), &[1.5, 1.5]);
        assert_eq!(nm.nu.values(), &[2.0, 1.0]);
        assert!(majorizes(&nm.nu, &nl.nu, &t));
    }
}
