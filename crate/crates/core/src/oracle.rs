//! Structure-blind ground truth for the solver.
//!
//! [`oracle_fix_w`] finds the solutions of `W(p) = p` in the box `(0, L]²`
//! by evaluating the residual field on a mixed linear/logarithmic grid,
//! seeding a damped Newton iteration from every cell where both residual
//! components change sign (and from grid-local minima of the residual), and
//! deduplicating the limits. It never uses the diagonal or the `x·y = 1`
//! structure the closed-form solver relies on.
//!
//! Near a fold, where two roots merge and the Jacobian is singular, Newton
//! converges only linearly and stalls about `√ε` away from the root. Seeds
//! that end at a nearly singular Jacobian are therefore re-solved on the fold
//! system `det J(p) = 0`, `u₁ᵀ G(p) = 0` (with `u₁` the dominant left singular
//! vector of `J`), which pins the merged root to working precision.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{apply_w, ModelParams, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Grid nodes per axis (half linear, half logarithmic).
    pub grid_n: usize,
    /// Residual target `‖W(p) − p‖∞ ≤ refine_tol·(1 + ‖p‖∞)`.
    pub refine_tol: f64,
    /// Two limits closer than `dedup_tol·(1 + ‖p‖∞)` are one point.
    pub dedup_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_n: 400,
            refine_tol: 1e-12,
            dedup_tol: 1e-7,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 16 {
            return Err(Error::InvalidParameter {
                name: "grid_n",
                value: self.grid_n as f64,
                reason: "must be at least 16",
            });
        }
        if !(self.refine_tol > 0.0 && self.refine_tol < self.dedup_tol && self.dedup_tol < 1.0) {
            return Err(Error::InvalidParameter {
                name: "refine_tol",
                value: self.refine_tol,
                reason: "need 0 < refine_tol < dedup_tol < 1",
            });
        }
        Ok(())
    }
}

const MAX_NEWTON_ITERS: usize = 200;
const MAX_HALVINGS: usize = 40;
const FOLD_SINGULAR_RATIO: f64 = 1e-5;
const FOLD_ACCEPT_TOL: f64 = 1e-10;

type Mat2 = [[f64; 2]; 2];

struct System {
    params: ModelParams,
}

impl System {
    fn residual(&self, p: Point2) -> [f64; 2] {
        match apply_w(&self.params, p) {
            Ok(q) => [q.x - p.x, q.y - p.y],
            Err(_) => [f64::NAN, f64::NAN],
        }
    }

    /// Jacobian of `W(p) − p`.
    fn jacobian(&self, p: Point2) -> Mat2 {
        let (t, l1, l2) = (self.params.theta(), self.params.ell1(), self.params.ell2());
        let d = 1.0 + t + p.x + p.y;
        let d3 = d * d * d;
        [
            [
                2.0 * l1 * (1.0 + p.x) * (t + p.y) / d3 - 1.0,
                -2.0 * l1 * (1.0 + p.x).powi(2) / d3,
            ],
            [
                -2.0 * l2 * (1.0 + p.y).powi(2) / d3,
                2.0 * l2 * (1.0 + p.y) * (t + p.x) / d3 - 1.0,
            ],
        ]
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

fn solve2(m: Mat2, rhs: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

/// Singular values `(σ1, σ2)` and the dominant left singular vector of `m`.
fn svd2(m: Mat2) -> (f64, f64, [f64; 2]) {
    // eigen-decomposition of m·mᵀ
    let a = m[0][0] * m[0][0] + m[0][1] * m[0][1];
    let b = m[0][0] * m[1][0] + m[0][1] * m[1][1];
    let c = m[1][0] * m[1][0] + m[1][1] * m[1][1];
    let half_tr = 0.5 * (a + c);
    let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let l1 = half_tr + disc;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
    let s1 = l1.sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    let v = if b.abs() > 0.0 {
        [l1 - c, b]
    } else if a >= c {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    (s1, s2, [v[0] / n, v[1] / n])
}

fn in_box(p: Point2, hi: f64) -> bool {
    p.x > 0.0 && p.y > 0.0 && p.x <= 2.0 * hi && p.y <= 2.0 * hi
}

/// Damped Newton on `G(p) = W(p) − p`. Returns the last iterate and whether
/// the residual target was met.
fn newton(sys: &System, start: Point2, tol: f64, hi: f64) -> Option<(Point2, bool)> {
    let mut p = start;
    let mut g = sys.residual(p);
    let mut r = norm(g);
    if !r.is_finite() {
        return None;
    }
    let mut converged = r <= tol * (1.0 + p.sup_norm());
    for _ in 0..MAX_NEWTON_ITERS {
        if r == 0.0 {
            break;
        }
        let Some(step) = solve2(sys.jacobian(p), [-g[0], -g[1]]) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = Point2::new(p.x + lambda * step[0], p.y + lambda * step[1]);
            if in_box(trial, hi) {
                let gt = sys.residual(trial);
                let rt = norm(gt);
                if rt < r {
                    accepted = Some((trial, gt, rt));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((np, ng, nr)) = accepted else {
            break;
        };
        p = np;
        g = ng;
        r = nr;
        if r <= tol * (1.0 + p.sup_norm()) {
            converged = true;
        }
    }
    Some((p, converged))
}

/// Newton on the fold system `(det J(p), u₁ᵀ G(p)) = 0` with a central
/// difference Jacobian.
fn refine_fold(sys: &System, start: Point2, hi: f64) -> Option<Point2> {
    let (_, _, reference) = svd2(sys.jacobian(start));
    let fold = |p: Point2| -> [f64; 2] {
        let j = sys.jacobian(p);
        let (_, _, mut u) = svd2(j);
        if u[0] * reference[0] + u[1] * reference[1] < 0.0 {
            u = [-u[0], -u[1]];
        }
        let g = sys.residual(p);
        [
            j[0][0] * j[1][1] - j[0][1] * j[1][0],
            u[0] * g[0] + u[1] * g[1],
        ]
    };
    let mut p = start;
    for _ in 0..60 {
        let h = fold(p);
        let ex = 1e-6 * (1.0 + p.x);
        let ey = 1e-6 * (1.0 + p.y);
        let hxp = fold(Point2::new(p.x + ex, p.y));
        let hxm = fold(Point2::new(p.x - ex, p.y));
        let hyp = fold(Point2::new(p.x, p.y + ey));
        let hym = fold(Point2::new(p.x, p.y - ey));
        let m = [
            [
                (hxp[0] - hxm[0]) / (2.0 * ex),
                (hyp[0] - hym[0]) / (2.0 * ey),
            ],
            [
                (hxp[1] - hxm[1]) / (2.0 * ex),
                (hyp[1] - hym[1]) / (2.0 * ey),
            ],
        ];
        let step = solve2(m, [-h[0], -h[1]])?;
        let next = Point2::new(p.x + step[0], p.y + step[1]);
        if !in_box(next, hi) {
            return None;
        }
        let done = norm(step) <= 4.0 * f64::EPSILON * (1.0 + next.sup_norm());
        p = next;
        if done {
            return Some(p);
        }
    }
    Some(p)
}

/// Radius within which the true root near the limit `p` is located:
/// residual (floored at rounding level) over the smallest singular value,
/// clamped to `[dedup_tol, 1e−3]` relative to `1 + ‖p‖∞`.
fn uncertainty(sys: &System, p: Point2, dedup_tol: f64) -> f64 {
    let scale = 1.0 + p.sup_norm();
    let r = norm(sys.residual(p)).max(f64::EPSILON * scale);
    let (_, s2, _) = svd2(sys.jacobian(p));
    let rad = if s2 > 0.0 {
        4.0 * r / s2
    } else {
        f64::INFINITY
    };
    rad.clamp(dedup_tol * scale, 1e-3 * scale)
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let half = n / 2;
    let lin = (0..half).map(|k| lo + (hi - lo) * k as f64 / (half - 1) as f64);
    let ratio = (hi / lo).ln();
    let log = (0..n - half).map(|k| lo * (ratio * k as f64 / (n - half - 1) as f64).exp());
    let mut v: Vec<f64> = lin.chain(log).collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
    v
}

fn sign_change(vals: [f64; 4]) -> bool {
    let any_nonneg = vals.iter().any(|&v| v >= 0.0);
    let any_nonpos = vals.iter().any(|&v| v <= 0.0);
    any_nonneg && any_nonpos
}

/// All solutions of `W(p) = p` in `(0, L]²`, sorted by `(x, y)`.
///
/// Seeds that fail to converge are dropped. An empty result is an error, as
/// `W` maps the compact box into itself and always has a fixed point.
pub fn oracle_fix_w(theta: f64, ell: f64, cfg: &OracleConfig) -> Result<Vec<Point2>> {
    cfg.validate()?;
    let params = ModelParams::symmetric(theta, ell)?;
    let sys = System { params };
    let hi = ell;
    // Any fixed point has coordinates at least L/(1 + θ + 2L)².
    let lo = 0.5 * ell / (1.0 + theta + 2.0 * ell).powi(2);
    let xs = axis(lo, hi, cfg.grid_n);
    let n = xs.len();

    let field: Vec<[f64; 2]> = (0..n * n)
        .into_par_iter()
        .map(|k| sys.residual(Point2::new(xs[k / n], xs[k % n])))
        .collect();
    let at = |i: usize, j: usize| field[i * n + j];

    let mut seeds: Vec<Point2> = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let corners = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)];
            if sign_change(corners.map(|c| c[0])) && sign_change(corners.map(|c| c[1])) {
                let (x0, x1, y0, y1) = (xs[i], xs[i + 1], xs[j], xs[j + 1]);
                seeds.extend([
                    Point2::new(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
                    Point2::new(x0, y0),
                    Point2::new(x1, y0),
                    Point2::new(x0, y1),
                    Point2::new(x1, y1),
                ]);
            }
        }
    }
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let r = norm(at(i, j));
            let is_min = (i - 1..=i + 1)
                .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                .filter(|&(a, b)| (a, b) != (i, j))
                .all(|(a, b)| norm(at(a, b)) > r);
            if is_min {
                seeds.push(Point2::new(xs[i], xs[j]));
            }
        }
    }

    let found: Vec<Point2> = seeds
        .par_iter()
        .filter_map(|&s| {
            let (p, converged) = newton(&sys, s, cfg.refine_tol, hi)?;
            let (s1, s2, _) = svd2(sys.jacobian(p));
            let near_singular = s2 <= FOLD_SINGULAR_RATIO * s1;
            let scale = 1.0 + p.sup_norm();
            if near_singular && norm(sys.residual(p)) <= 1e-6 * scale {
                if let Some(f) = refine_fold(&sys, p, hi) {
                    let rf = norm(sys.residual(f));
                    if rf <= FOLD_ACCEPT_TOL * (1.0 + f.sup_norm()) && f.sup_dist(p) <= 1e-3 * scale
                    {
                        return Some(f);
                    }
                }
            }
            converged.then_some(p)
        })
        .filter(|p| p.x <= hi && p.y <= hi)
        .collect();

    // Limits near a degenerate root scatter along its kernel, so each one
    // gets an uncertainty radius `‖G‖/σ₂` and overlapping limits are merged,
    // keeping the best-conditioned one.
    let mut ranked: Vec<(f64, Point2)> = found
        .into_iter()
        .map(|p| (uncertainty(&sys, p, cfg.dedup_tol), p))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut kept: Vec<(f64, Point2)> = Vec::new();
    for (rad, p) in ranked {
        if !kept.iter().any(|&(rq, q)| q.sup_dist(p) <= rad + rq) {
            kept.push((rad, p));
        }
    }
    let mut out: Vec<Point2> = kept.into_iter().map(|(_, p)| p).collect();
    out.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    if out.is_empty() {
        return Err(Error::OracleEmpty { theta, ell });
    }
    Ok(out)
}

fn horner(c: [f64; 4], x: f64) -> f64 {
    ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let neg_at_a = f(a) < 0.0;
    while (b - a).abs() > 1e-14 * (1.0 + a.abs().max(b.abs())) {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Real roots of `c3·x³ + c2·x² + c1·x + c0` in `(lo, hi)` by a dense sign
/// scan (`2·10⁴` samples) and bisection. Touching (double) roots, which show
/// no sign change, are located as zeros of the derivative where the cubic
/// itself vanishes to rounding level.
pub fn oracle_cubic_roots(c3: f64, c2: f64, c1: f64, c0: f64, lo: f64, hi: f64) -> Vec<f64> {
    assert!(lo < hi, "empty interval");
    assert!(c3 != 0.0, "not a cubic");
    let c = [c3, c2, c1, c0];
    let f = |x: f64| horner(c, x);
    let df = |x: f64| (3.0 * c3 * x + 2.0 * c2) * x + c1;
    let scale = |x: f64| (c3 * x * x * x).abs() + (c2 * x * x).abs() + (c1 * x).abs() + c0.abs();
    const SAMPLES: usize = 20_000;
    let grid: Vec<f64> = (0..=SAMPLES)
        .map(|k| lo + (hi - lo) * k as f64 / SAMPLES as f64)
        .collect();

    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 && a > lo {
            roots.push(a);
        } else if fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(f, a, b));
        }
        let (da, db) = (df(a), df(b));
        if (da < 0.0) != (db < 0.0) && da != 0.0 {
            let cx = bisect(df, a, b);
            if f(cx).abs() <= 1e-12 * scale(cx) {
                roots.push(cx);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * (1.0 + b.abs()));
    roots
}
