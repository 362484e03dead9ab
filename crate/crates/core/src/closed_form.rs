//! Radical-expression evaluations kept as audits of the numerical solver.
//!
//! Neither routine here feeds the enumeration in [`crate::solver`]. The
//! Cardano expressions for the diagonal cubic are compared root by root with
//! the polished numeric roots, and the nested-radical expressions for the
//! off-diagonal coordinates are checked against the fixed-point equations.
//! Both comparisons produce reports rather than hard failures.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{ModelParams, Point2};
use crate::solver::{diagonal_fixed_points, offdiag_fixed_points, w_residual};
use crate::tol::RESIDUAL_TOL;

/// Cardano's expressions for the roots of `2u³ − √L·u² + (θ + 1)u − √L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CardanoRoots {
    /// The quantity under the square root inside `N`. Positive exactly when
    /// the cubic has one real root.
    pub radicand: f64,
    pub n: Complex64,
    pub roots: [Complex64; 3],
}

/// Evaluates the three Cardano roots. For a nonnegative radicand `N` uses the
/// real cube root (so `u1` is real); otherwise the principal complex cube root.
pub fn cardano_roots(theta: f64, ell: f64) -> CardanoRoots {
    let s = ell.sqrt();
    let radicand = 216.0 * (1.0 + theta).powi(3)
        + (1917.0 - 1026.0 * theta - 27.0 * theta * theta + 108.0 * ell) * ell;
    let a = (45.0 - 9.0 * theta + ell) * s;
    let n = if radicand >= 0.0 {
        Complex64::new((a + radicand.sqrt()).cbrt(), 0.0)
    } else {
        Complex64::new(a, (-radicand).sqrt()).cbrt()
    };
    let w = 6.0 + 6.0 * theta - ell;
    let i3 = Complex64::new(0.0, 3f64.sqrt());
    let one = Complex64::new(1.0, 0.0);
    let u1 = s / 6.0 - w / (6.0 * n) + n / 6.0;
    let u2 = s / 6.0 + (one + i3) * w / (12.0 * n) - (one - i3) * n / 12.0;
    let u3 = s / 6.0 + (one - i3) * w / (12.0 * n) - (one + i3) * n / 12.0;
    CardanoRoots {
        radicand,
        n,
        roots: [u1, u2, u3],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardanoCheck {
    pub theta: f64,
    pub ell: f64,
    pub radicand: f64,
    /// Real parts of the Cardano roots whose imaginary part is negligible,
    /// sorted increasingly.
    pub closed_form: Vec<f64>,
    /// Positive roots from the numerical solver.
    pub numeric: Vec<f64>,
    /// Largest relative deviation over matched roots (infinite when the
    /// counts differ).
    pub max_rel_error: f64,
    pub agrees: bool,
}

/// Compares the real Cardano roots with the solver's roots at relative
/// tolerance `rel_tol`.
pub fn cardano_cross_check(theta: f64, ell: f64, rel_tol: f64) -> Result<CardanoCheck> {
    let numeric = diagonal_fixed_points(theta, ell)?.us;
    let c = cardano_roots(theta, ell);
    let mut closed_form: Vec<f64> = c
        .roots
        .iter()
        .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    closed_form.sort_by(f64::total_cmp);

    let max_rel_error = if closed_form.len() == numeric.len() {
        closed_form
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).abs() / b.abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(CardanoCheck {
        theta,
        ell,
        radicand: c.radicand,
        closed_form,
        numeric,
        max_rel_error,
        agrees: max_rel_error <= rel_tol,
    })
}

/// Nested-radical expressions `x1 … x4` for the off-diagonal coordinates:
///
/// ```text
/// x1,2 = (√L + √(L − 4(θ−1)) ± √(2L − 4θ + 2√(L² − 4(θ−1)L))) / 2
/// x3,4 = (√L − √(L − 4(θ−1)) ± √(2L − 4θ − 2√(L² − 4(θ−1)L))) / 2
/// ```
///
/// An entry is `None` where a radicand is negative.
pub fn offdiag_radical_forms(theta: f64, ell: f64) -> [Option<f64>; 4] {
    let disc = ell - 4.0 * (theta - 1.0);
    if disc < 0.0 {
        return [None; 4];
    }
    let (s, d) = (ell.sqrt(), disc.sqrt());
    let inner = (ell * ell - 4.0 * (theta - 1.0) * ell).max(0.0).sqrt();
    let outer_plus = 2.0 * ell - 4.0 * theta + 2.0 * inner;
    let outer_minus = 2.0 * ell - 4.0 * theta - 2.0 * inner;
    let branch = |head: f64, outer: f64, sign: f64| {
        (outer >= 0.0).then(|| 0.5 * (head + sign * outer.sqrt()))
    };
    [
        branch(s + d, outer_plus, 1.0),
        branch(s + d, outer_plus, -1.0),
        branch(s - d, outer_minus, 1.0),
        branch(s - d, outer_minus, -1.0),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePoint {
    pub label: String,
    pub point: Point2,
    pub residual: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadicalFormAudit {
    pub theta: f64,
    pub ell: f64,
    /// Off-diagonal points from the `ξ` route.
    pub derived: Vec<CandidatePoint>,
    /// Points `(x1, x2)`, `(x2, x1)`, `(x3, x4)`, `(x4, x3)` built from the
    /// radical expressions, where defined and positive.
    pub radical: Vec<CandidatePoint>,
    /// True when both lists hold the same points within `1e−8` and every
    /// radical point passes the residual bound.
    pub agreement: bool,
    pub report: String,
}

/// Evaluates the radical expressions at `(θ, L)`, checks them against
/// `W(p) = p`, and compares them with the `ξ`-route points.
pub fn audit_radical_forms(theta: f64, ell: f64) -> Result<RadicalFormAudit> {
    let params = ModelParams::symmetric(theta, ell)?;
    let candidate = |label: String, point: Point2| {
        let residual = w_residual(&params, point);
        CandidatePoint {
            label,
            point,
            residual,
            passes: residual <= RESIDUAL_TOL * (1.0 + point.sup_norm()),
        }
    };

    let derived: Vec<CandidatePoint> = offdiag_fixed_points(theta, ell)?
        .pairs
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .enumerate()
        .map(|(k, p)| candidate(format!("xi-route p{}", k + 1), p))
        .collect();

    let xs = offdiag_radical_forms(theta, ell);
    let mut radical = Vec::new();
    for (k, (i, j)) in [(0, 1), (1, 0), (2, 3), (3, 2)].into_iter().enumerate() {
        if let (Some(a), Some(b)) = (xs[i], xs[j]) {
            if a > 0.0 && b > 0.0 && a != b {
                radical.push(candidate(format!("radical p{}", k + 1), Point2::new(a, b)));
            }
        }
    }

    let matched = radical.len() == derived.len()
        && radical.iter().all(|r| {
            derived
                .iter()
                .any(|d| d.point.sup_dist(r.point) <= 1e-8 * (1.0 + d.point.sup_norm()))
        });
    let agreement = matched && radical.iter().all(|r| r.passes);

    let mut report = String::new();
    let _ = writeln!(
        report,
        "off-diagonal closed-form audit at theta={theta}, L={ell}"
    );
    for c in derived.iter().chain(&radical) {
        let _ = writeln!(
            report,
            "  {:<16} ({:.10e}, {:.10e})  x*y={:.6}  residual={:.3e}  {}",
            c.label,
            c.point.x,
            c.point.y,
            c.point.x * c.point.y,
            c.residual,
            if c.passes { "fixed" } else { "NOT fixed" }
        );
    }
    let _ = writeln!(
        report,
        "  verdict: {}",
        if agreement {
            "AGREEMENT (radical forms reproduce the fixed points)"
        } else {
            "DISAGREEMENT (radical forms do not reproduce the fixed points)"
        }
    );

    Ok(RadicalFormAudit {
        theta,
        ell,
        derived,
        radical,
        agreement,
        report,
    })
}
