//! The two curves whose intersections are the fixed points of symmetric `W`.
//!
//! Solving the first fixed-point equation for `y` gives `y = ψ(x)`; the second
//! one is its reflection `x = ψ(y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, Point2};
use crate::solver::bracketed_root;

/// Number of decades below `L` covered by the logarithmic sampling.
const DECADES: f64 = 10.0;

/// `ψ(x) = √L (1/√x + √x) − (1 + θ + x)`.
pub fn psi(theta: f64, ell: f64, x: f64) -> f64 {
    let r = x.sqrt();
    ell.sqrt() * (1.0 / r + r) - (1.0 + theta + x)
}

fn psi_deriv(theta: f64, ell: f64, x: f64) -> f64 {
    let _ = theta;
    let r = x.sqrt();
    0.5 * ell.sqrt() * (1.0 / r - 1.0 / (x * r)) - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusRow {
    pub x: f64,
    pub psi_x: f64,
    /// The reflected locus `x = ψ(y)` sampled at `y = x`, as a point.
    pub refl_x: f64,
    pub refl_y: f64,
}

fn log_grid(ell: f64, samples: usize) -> impl Iterator<Item = f64> {
    let n = samples - 1;
    (0..samples).map(move |k| {
        if k == n {
            ell
        } else {
            ell * 10f64.powf(-DECADES * (1.0 - k as f64 / n as f64))
        }
    })
}

/// Samples both loci at `samples` logarithmically spaced abscissae in
/// `(0, L]`. Rows with `ψ(x) ≤ 0` are kept.
pub fn loci(theta: f64, ell: f64, samples: usize) -> Result<Vec<LocusRow>> {
    ModelParams::symmetric(theta, ell)?;
    if samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "must be at least 2",
        });
    }
    Ok(log_grid(ell, samples)
        .map(|x| {
            let psi_x = psi(theta, ell, x);
            LocusRow {
                x,
                psi_x,
                refl_x: psi_x,
                refl_y: x,
            }
        })
        .collect())
}

/// Transversal intersections of `y = ψ(x)` and `x = ψ(y)` with positive
/// coordinates, located as sign changes of `ψ(ψ(x)) − x` on a fine
/// logarithmic grid and refined by bisection. Only intersections with
/// `x ≤ y` are searched for; the rest are their mirror images. Sorted by `x`.
pub fn locus_intersections(theta: f64, ell: f64) -> Result<Vec<Point2>> {
    ModelParams::symmetric(theta, ell)?;
    let g = |x: f64| {
        let y = psi(theta, ell, x);
        (y > 0.0).then(|| psi(theta, ell, y) - x)
    };
    let dg = |x: f64| {
        let y = psi(theta, ell, x);
        psi_deriv(theta, ell, y) * psi_deriv(theta, ell, x) - 1.0
    };
    let xs: Vec<f64> = log_grid(ell, 40_001).collect();
    let mut out: Vec<Point2> = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (Some(ga), Some(gb)) = (g(a), g(b)) else {
            continue;
        };
        let x = if ga == 0.0 {
            a
        } else if ga.signum() != gb.signum() && gb != 0.0 {
            bracketed_root(|x| g(x).unwrap_or(f64::NAN), dg, a, b)
        } else {
            continue;
        };
        let p = Point2::new(x, psi(theta, ell, x));
        let tol = 1e-9 * (1.0 + p.sup_norm());
        if p.x > p.y + tol {
            continue;
        }
        if out.last().is_none_or(|q| q.sup_dist(p) > tol) {
            out.push(p);
        }
    }
    let mirrored: Vec<Point2> = out
        .iter()
        .filter(|p| (p.x - p.y).abs() > 1e-9 * (1.0 + p.sup_norm()))
        .map(|p| p.swap())
        .collect();
    out.extend(mirrored);
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(out)
}
