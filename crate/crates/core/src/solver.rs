//! Closed-form enumeration of the fixed points of `W` for `L1 = L2 = L`.
//!
//! A fixed point satisfies `y = ψ(x)` and `x = ψ(y)` with
//! `ψ(x) = √L(1/√x + √x) − (1 + θ + x)`. Subtracting the two equations in
//! `u = √x`, `v = √y` leaves `(u − v)(1/(uv) − 1) = 0`, so fixed points are
//! either diagonal (`u = v`, a cubic in `u`) or satisfy `uv = 1`, where
//! `ξ = u + 1/u ≥ 2` solves `ξ² − √L·ξ + θ − 1 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    apply_f_diag, apply_f_truncated, apply_w, lift_point, ActivityVector, ModelParams, Point2,
    SpinVector,
};
use crate::tol::{near, BOUNDARY_REL_TOL, DEDUP_TOL, RESIDUAL_TOL};

/// Below or at this `θ` the diagonal map has a single fixed point for all `L`.
pub const THETA_DIAGONAL_CUSP: f64 = 17.0;

/// Relative agreement required between the odd and even activity sums before
/// the symmetric classification is applied to a truncated sequence.
pub const SYMMETRIC_SUM_TOL: f64 = 1e-9;

/// The thresholds `(L̂1, L̂2)` bounding the three-diagonal-root band, present
/// only for `θ > 17`.
pub fn hat_thresholds(theta: f64) -> Option<(f64, f64)> {
    if !(theta > THETA_DIAGONAL_CUSP && theta.is_finite()) {
        return None;
    }
    // θ² − 18θ + 17 = (θ − 1)(θ − 17)
    let disc = ((theta - 1.0) * (theta - 17.0)).sqrt();
    let base = 2.0 * theta * theta + 76.0 * theta - 142.0;
    let upper = (base + (2.0 * theta - 34.0) * disc) / 16.0;
    // L̂1·L̂2 = 2(θ + 1)³ avoids cancellation in the lower branch.
    let lower = 2.0 * (theta + 1.0).powi(3) / upper;
    Some((lower, upper))
}

/// Where `L` sits relative to the diagonal thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DiagonalCase {
    One,
    OnLower,
    OnUpper,
    Three,
}

fn diagonal_case(theta: f64, ell: f64) -> DiagonalCase {
    match hat_thresholds(theta) {
        None => DiagonalCase::One,
        Some((lo, hi)) => {
            if near(ell, lo, BOUNDARY_REL_TOL) {
                DiagonalCase::OnLower
            } else if near(ell, hi, BOUNDARY_REL_TOL) {
                DiagonalCase::OnUpper
            } else if ell > lo && ell < hi {
                DiagonalCase::Three
            } else {
                DiagonalCase::One
            }
        }
    }
}

/// Number of diagonal fixed points predicted by the threshold analysis.
pub fn expected_diagonal_count(theta: f64, ell: f64) -> usize {
    match diagonal_case(theta, ell) {
        DiagonalCase::One => 1,
        DiagonalCase::OnLower | DiagonalCase::OnUpper => 2,
        DiagonalCase::Three => 3,
    }
}

/// `2u³ − √L·u² + (θ + 1)u − √L`.
#[inline]
pub fn diagonal_cubic(theta: f64, sqrt_ell: f64, u: f64) -> f64 {
    ((2.0 * u - sqrt_ell) * u + (theta + 1.0)) * u - sqrt_ell
}

#[inline]
fn diagonal_cubic_deriv(theta: f64, sqrt_ell: f64, u: f64) -> f64 {
    (6.0 * u - 2.0 * sqrt_ell) * u + (theta + 1.0)
}

/// Magnitude scale of the cubic's terms at `u`, used for residual bounds.
#[inline]
fn cubic_scale(theta: f64, sqrt_ell: f64, u: f64) -> f64 {
    2.0 * u.powi(3) + sqrt_ell * u * u + (theta + 1.0) * u + sqrt_ell
}

/// Hybrid bisection/Newton on a bracket with a sign change. The bracket is
/// first narrowed by bisection, then Newton steps polish the root, falling
/// back to bisection whenever a step leaves the bracket.
pub(crate) fn bracketed_root<F, D>(f: F, df: D, a: f64, b: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    // Orient so that f(lo) < 0 < f(hi).
    let (mut lo, mut hi) = if fa < 0.0 { (a, b) } else { (b, a) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= 1e-6 * (1.0 + mid.abs()) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        let (left, right) = (lo.min(hi), lo.max(hi));
        if !(d != 0.0 && next > left && next < right) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        x = next;
    }
    x
}

/// Diagonal fixed points `x* = u²`, sorted increasingly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalRoots {
    /// Positive roots `u` of the diagonal cubic.
    pub us: Vec<f64>,
    /// The fixed points `x = u²`, adjusted by at most a few ulps to minimise
    /// the residual.
    pub xs: Vec<f64>,
    /// `|f(x) − x|` for each root.
    pub residuals: Vec<f64>,
}

impl DiagonalRoots {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

fn check_params(theta: f64, ell: f64) -> Result<ModelParams> {
    ModelParams::symmetric(theta, ell)
}

/// All positive roots of `2u³ − √L·u² + (θ + 1)u − √L = 0`, mapped to `x = u²`.
///
/// The roots lie in `(0, √L)`: the cubic is `−√L` at zero and `L^{3/2} + θ√L`
/// at `√L`. Its critical points split that interval into monotone pieces, each
/// holding at most one root. On the threshold curves `L = L̂1`, `L = L̂2` the
/// count is taken from the thresholds and the double root is the critical
/// point where the cubic touches zero.
pub fn diagonal_fixed_points(theta: f64, ell: f64) -> Result<DiagonalRoots> {
    check_params(theta, ell)?;
    let s = ell.sqrt();
    let p = |u: f64| diagonal_cubic(theta, s, u);
    let dp = |u: f64| diagonal_cubic_deriv(theta, s, u);

    // 6u² − 2√L·u + (θ + 1) = 0
    let crit = {
        let disc = ell - 6.0 * (theta + 1.0);
        (disc > 0.0).then(|| {
            let c2 = (s + disc.sqrt()) / 6.0;
            ((theta + 1.0) / (6.0 * c2), c2)
        })
    };

    let case = diagonal_case(theta, ell);
    let mut us = Vec::with_capacity(3);
    match (case, crit) {
        (DiagonalCase::OnLower | DiagonalCase::OnUpper, Some((c1, c2))) => {
            // The extremum closer to zero is the double root.
            if p(c1).abs() / cubic_scale(theta, s, c1) <= p(c2).abs() / cubic_scale(theta, s, c2) {
                us.push(c1);
                us.push(bracketed_root(p, dp, c2, s));
            } else {
                us.push(bracketed_root(p, dp, 0.0, c1));
                us.push(c2);
            }
        }
        _ => {
            let knots: Vec<f64> = match crit {
                Some((c1, c2)) => vec![0.0, c1, c2, s],
                None => vec![0.0, s],
            };
            for w in knots.windows(2) {
                let (fa, fb) = (p(w[0]), p(w[1]));
                // A root exactly at a knot is credited to the interval it closes.
                if fb == 0.0 || (fa < 0.0) != (fb < 0.0) && fa != 0.0 {
                    us.push(bracketed_root(p, dp, w[0], w[1]));
                }
            }
            let expected = expected_diagonal_count(theta, ell);
            if us.len() != expected {
                return Err(Error::CountMismatch {
                    theta,
                    ell,
                    expected,
                    found: us.len(),
                });
            }
        }
    }
    us.sort_by(f64::total_cmp);

    let gap = |x: f64| apply_f_diag(theta, ell, x).map(|fx| (fx - x).abs());
    let xs = us
        .iter()
        .map(|u| ulp_polish(u * u, gap))
        .collect::<Result<Vec<f64>>>()?;
    let residuals = xs.iter().map(|&x| gap(x)).collect::<Result<Vec<_>>>()?;
    Ok(DiagonalRoots { us, xs, residuals })
}

/// Squaring a polished `u` can cost the last bits of `x`; pick the
/// representable neighbour of `x` (within 4 ulps) with the smallest residual.
fn ulp_polish<G>(x: f64, gap: G) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut best = (gap(x)?, x);
    for k in 1..=4u64 {
        for cand in [
            f64::from_bits(x.to_bits() - k),
            f64::from_bits(x.to_bits() + k),
        ] {
            if cand > 0.0 && cand.is_finite() {
                let r = gap(cand)?;
                if r < best.0 {
                    best = (r, cand);
                }
            }
        }
    }
    Ok(best.1)
}

/// Real roots of `ξ² − √L·ξ + θ − 1 = 0`, largest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiRoots {
    pub roots: Vec<f64>,
    /// Set when `L = 4(θ − 1)` and the single entry of `roots` is a double root.
    pub double: bool,
}

pub fn xi_roots(theta: f64, ell: f64) -> Result<XiRoots> {
    check_params(theta, ell)?;
    let s = ell.sqrt();
    let edge = 4.0 * (theta - 1.0);
    if near(ell, edge, BOUNDARY_REL_TOL) {
        return Ok(XiRoots {
            roots: vec![0.5 * s],
            double: true,
        });
    }
    let disc = ell - edge;
    if disc < 0.0 {
        return Ok(XiRoots {
            roots: Vec::new(),
            double: false,
        });
    }
    let xi1 = 0.5 * (s + disc.sqrt());
    // ξ1·ξ2 = θ − 1
    let xi2 = (theta - 1.0) / xi1;
    Ok(XiRoots {
        roots: vec![xi1, xi2],
        double: false,
    })
}

/// Off-diagonal fixed points, grouped as symmetric pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffDiagPairs {
    /// Each pair is `((x, y), (y, x))` with `x > y` and `x·y = 1`.
    pub pairs: Vec<(Point2, Point2)>,
    /// The admitted roots `ξ > 2` that generated the pairs, in the same order.
    pub xis: Vec<f64>,
}

impl OffDiagPairs {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The curve `L = (θ + 3)²/4` on which one `ξ` root equals 2.
pub fn xi_two_curve(theta: f64) -> f64 {
    0.25 * (theta + 3.0) * (theta + 3.0)
}

pub fn offdiag_fixed_points(theta: f64, ell: f64) -> Result<OffDiagPairs> {
    let xi = xi_roots(theta, ell)?;
    let mut admitted: Vec<f64> = xi.roots.clone();
    if near(ell, xi_two_curve(theta), BOUNDARY_REL_TOL) {
        // ξ = 2 gives u = 1, the diagonal point (1, 1).
        if let Some(k) = (0..admitted.len()).min_by(|&a, &b| {
            (admitted[a] - 2.0)
                .abs()
                .total_cmp(&(admitted[b] - 2.0).abs())
        }) {
            admitted.remove(k);
        }
    }
    admitted.retain(|&x| x > 2.0);

    let pairs = admitted
        .iter()
        .map(|&xi| {
            let t = ((xi - 2.0) * (xi + 2.0)).sqrt();
            let u = 0.5 * (xi + t);
            let v = 1.0 / u;
            let p = Point2::new(u * u, v * v);
            (p, p.swap())
        })
        .collect();
    Ok(OffDiagPairs {
        pairs,
        xis: admitted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Diagonal,
    Offdiag,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: Point2,
    pub kind: PointKind,
    /// `‖W(p) − p‖∞`.
    pub residual: f64,
}

/// `Fix(W)` for symmetric parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub theta: f64,
    pub ell: f64,
    pub diagonal: DiagonalRoots,
    pub offdiag: OffDiagPairs,
    /// `(i, j)`: diagonal count and off-diagonal count (`2·pairs`).
    pub counts: (usize, usize),
}

impl FixedPointSet {
    /// Members in canonical order: diagonal points increasing, then each
    /// off-diagonal pair `(x, y)`, `(y, x)` with `x > y`, larger `ξ` first.
    pub fn points(&self) -> Vec<FixedPoint> {
        let params = ModelParams::symmetric(self.theta, self.ell).expect("validated in fix_w");
        let diag = self.diagonal.xs.iter().map(|&x| Point2::new(x, x));
        let off = self.offdiag.pairs.iter().flat_map(|&(a, b)| [a, b]);
        diag.map(|p| (p, PointKind::Diagonal))
            .chain(off.map(|p| (p, PointKind::Offdiag)))
            .map(|(point, kind)| FixedPoint {
                point,
                kind,
                residual: w_residual(&params, point),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.counts.0 + self.counts.1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `‖W(p) − p‖∞`.
pub fn w_residual(params: &ModelParams, p: Point2) -> f64 {
    apply_w(params, p)
        .map(|q| q.sup_dist(p))
        .unwrap_or(f64::INFINITY)
}

/// Every fixed point of `W` for `L1 = L2 = L`, with residuals verified.
pub fn fix_w(theta: f64, ell: f64) -> Result<FixedPointSet> {
    check_params(theta, ell)?;
    let diagonal = diagonal_fixed_points(theta, ell)?;
    let mut offdiag = offdiag_fixed_points(theta, ell)?;

    // A pair can only collide with the diagonal at (1, 1); credit it there.
    let keep: Vec<bool> = offdiag
        .pairs
        .iter()
        .map(|(p, _)| {
            !diagonal
                .xs
                .iter()
                .any(|&x| Point2::new(x, x).sup_dist(*p) <= DEDUP_TOL)
        })
        .collect();
    let mut k = keep.iter();
    offdiag.pairs.retain(|_| *k.next().unwrap());
    let mut k = keep.iter();
    offdiag.xis.retain(|_| *k.next().unwrap());

    let set = FixedPointSet {
        theta,
        ell,
        counts: (diagonal.len(), 2 * offdiag.len()),
        diagonal,
        offdiag,
    };
    for fp in set.points() {
        let p = fp.point;
        if fp.residual.is_nan() || fp.residual > RESIDUAL_TOL * (1.0 + p.sup_norm()) {
            return Err(Error::Residual {
                x: p.x,
                y: p.y,
                residual: fp.residual,
            });
        }
    }
    Ok(set)
}

/// Fixed points of the truncated operator `F`, obtained by lifting `Fix(W)`.
///
/// The activity vector must have equal odd and even sums (within
/// [`SYMMETRIC_SUM_TOL`]); their common value is the `L` used for solving.
/// Each lifted vector is checked against `F` before being returned.
pub fn fix_f(lam: &ActivityVector, theta: f64) -> Result<Vec<SpinVector>> {
    let ell = lam.symmetric_sum(SYMMETRIC_SUM_TOL)?;
    let params = ModelParams::symmetric(theta, ell)?;
    let set = fix_w(theta, ell)?;
    set.points()
        .iter()
        .enumerate()
        .map(|(index, fp)| {
            let v = lift_point(lam, &params, fp.point)?;
            let residual = apply_f_truncated(lam, theta, &v)?.sup_dist(&v);
            if residual <= RESIDUAL_TOL * (1.0 + v.sup_norm()) {
                Ok(v)
            } else {
                Err(Error::LiftResidual { index, residual })
            }
        })
        .collect()
}
