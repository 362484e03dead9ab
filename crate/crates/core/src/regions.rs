//! The seven parameter regions `A(i,j)`: `i` diagonal and `j` off-diagonal
//! fixed points of `W` for `L1 = L2 = L`.
//!
//! Two independent routes are provided. [`classify_formula`] evaluates the
//! inequalities that define each region; [`classify_computed`] counts the
//! solver's fixed points. Equality pieces of the regions (the curves
//! `L = L̂1`, `L = L̂2`, `L = 4(θ − 1)`) have measure zero, so membership is
//! decided with a relative tolerance on `L`. Points the inequalities leave
//! uncovered (for instance `L = (θ + 3)²/4` with `5 < θ ≤ 17`) are reported as
//! [`Classification::Unassigned`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{fix_w, hat_thresholds, xi_two_curve};
use crate::tol::Cmp;

/// Default relative tolerance for on-curve membership.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// `θ = 9 + 8√2`, where `L̂1` touches `(θ + 3)²/4`.
pub fn theta_tangency() -> f64 {
    9.0 + 8.0 * std::f64::consts::SQRT_2
}

pub const THETA_XI_CORNER: f64 = 5.0;
pub const THETA_CUSP: f64 = 17.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "A1,0")]
    A10,
    #[serde(rename = "A1,2")]
    A12,
    #[serde(rename = "A2,2")]
    A22,
    #[serde(rename = "A1,4")]
    A14,
    #[serde(rename = "A3,2")]
    A32,
    #[serde(rename = "A2,4")]
    A24,
    #[serde(rename = "A3,4")]
    A34,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::A10,
        Region::A12,
        Region::A22,
        Region::A14,
        Region::A32,
        Region::A24,
        Region::A34,
    ];

    /// `(i, j)`.
    pub fn counts(self) -> (usize, usize) {
        match self {
            Region::A10 => (1, 0),
            Region::A12 => (1, 2),
            Region::A22 => (2, 2),
            Region::A14 => (1, 4),
            Region::A32 => (3, 2),
            Region::A24 => (2, 4),
            Region::A34 => (3, 4),
        }
    }

    pub fn from_counts(i: usize, j: usize) -> Option<Region> {
        Region::ALL.into_iter().find(|r| r.counts() == (i, j))
    }

    pub fn total(self) -> usize {
        let (i, j) = self.counts();
        i + j
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.counts();
        write!(f, "A{i},{j}")
    }
}

/// The curves bounding the regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCurve {
    /// `L = 4(θ − 1)`
    #[serde(rename = "L=4(theta-1)")]
    XiDouble,
    /// `L = (θ + 3)²/4`
    #[serde(rename = "L=(theta+3)^2/4")]
    XiTwo,
    /// `L = L̂1(θ)`
    #[serde(rename = "L=Lhat1")]
    HatLower,
    /// `L = L̂2(θ)`
    #[serde(rename = "L=Lhat2")]
    HatUpper,
}

impl fmt::Display for BoundaryCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCurve::XiDouble => "L=4(theta-1)",
            BoundaryCurve::XiTwo => "L=(theta+3)^2/4",
            BoundaryCurve::HatLower => "L=Lhat1",
            BoundaryCurve::HatUpper => "L=Lhat2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub region: Region,
    pub on_boundary: Vec<BoundaryCurve>,
}

impl RegionLabel {
    pub fn i(&self) -> usize {
        self.region.counts().0
    }

    pub fn j(&self) -> usize {
        self.region.counts().1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Classification {
    Assigned(RegionLabel),
    Unassigned { on_boundary: Vec<BoundaryCurve> },
}

impl Classification {
    pub fn region(&self) -> Option<Region> {
        match self {
            Classification::Assigned(l) => Some(l.region),
            Classification::Unassigned { .. } => None,
        }
    }

    pub fn on_boundary(&self) -> &[BoundaryCurve] {
        match self {
            Classification::Assigned(l) => &l.on_boundary,
            Classification::Unassigned { on_boundary } => on_boundary,
        }
    }
}

fn check(theta: f64, ell: f64) -> Result<()> {
    crate::model::ModelParams::symmetric(theta, ell).map(|_| ())
}

/// Curves `L` lies on, within `rel_tol`.
pub fn boundaries_at(theta: f64, ell: f64, rel_tol: f64) -> Vec<BoundaryCurve> {
    let c = Cmp { rel: rel_tol };
    let mut out = Vec::new();
    if c.eq(ell, 4.0 * (theta - 1.0)) {
        out.push(BoundaryCurve::XiDouble);
    }
    if c.eq(ell, xi_two_curve(theta)) {
        out.push(BoundaryCurve::XiTwo);
    }
    if let Some((lo, hi)) = hat_thresholds(theta) {
        if c.eq(ell, lo) {
            out.push(BoundaryCurve::HatLower);
        }
        if c.eq(ell, hi) {
            out.push(BoundaryCurve::HatUpper);
        }
    }
    out
}

/// Classifies `(θ, L)` by the defining inequalities of the seven regions.
///
/// Equalities in `L` hold within `rel_tol`; strict inequalities require the
/// values to differ by more than that. Comparisons in `θ` are exact. The
/// equality pieces are tested first, so a point within tolerance of a curve
/// is credited to the curve.
#[allow(clippy::if_same_then_else)]
pub fn classify_formula(theta: f64, ell: f64, rel_tol: f64) -> Result<Classification> {
    check(theta, ell)?;
    if rel_tol.is_nan() || rel_tol < 0.0 {
        return Err(Error::InvalidParameter {
            name: "rel_tol",
            value: rel_tol,
            reason: "must be nonnegative",
        });
    }
    let c = Cmp { rel: rel_tol };
    let edge = 4.0 * (theta - 1.0);
    let two = xi_two_curve(theta);
    let tan = theta_tangency();
    let hats = hat_thresholds(theta);
    let above_cusp = theta > THETA_CUSP;
    let (lo, hi) = hats.unwrap_or((f64::NAN, f64::NAN));

    let region = if above_cusp && c.eq(ell, hi) {
        Some(Region::A22)
    } else if above_cusp && theta < tan && c.eq(ell, lo) {
        Some(Region::A22)
    } else if theta > tan && c.eq(ell, lo) {
        Some(Region::A24)
    } else if theta > THETA_XI_CORNER && c.eq(ell, edge) {
        Some(Region::A12)
    } else if theta <= THETA_XI_CORNER && c.le(ell, two) {
        Some(Region::A10)
    } else if theta > THETA_XI_CORNER && c.lt(ell, edge) {
        Some(Region::A10)
    } else if theta <= THETA_CUSP && c.gt(ell, two) {
        Some(Region::A12)
    } else if above_cusp && theta <= tan && c.ge(ell, two) && c.lt(ell, lo) {
        Some(Region::A12)
    } else if above_cusp && c.gt(ell, hi) {
        Some(Region::A12)
    } else if theta > THETA_XI_CORNER && theta <= tan && c.gt(ell, edge) && c.lt(ell, two) {
        Some(Region::A14)
    } else if theta > tan && c.gt(ell, edge) && c.lt(ell, lo) {
        Some(Region::A14)
    } else if above_cusp && theta <= tan && c.gt(ell, lo) && c.lt(ell, hi) {
        Some(Region::A32)
    } else if theta > tan && c.gt(ell, two) && c.lt(ell, hi) {
        Some(Region::A32)
    } else if theta > tan && c.gt(ell, lo) && c.lt(ell, two) {
        Some(Region::A34)
    } else {
        None
    };

    let on_boundary = boundaries_at(theta, ell, rel_tol);
    Ok(match region {
        Some(region) => Classification::Assigned(RegionLabel {
            region,
            on_boundary,
        }),
        None => Classification::Unassigned { on_boundary },
    })
}

/// Classifies `(θ, L)` by counting the solver's fixed points. Always assigned.
pub fn classify_computed(theta: f64, ell: f64) -> Result<RegionLabel> {
    let set = fix_w(theta, ell)?;
    let (i, j) = set.counts;
    let region = Region::from_counts(i, j).ok_or(Error::UnknownCounts { i, j })?;
    Ok(RegionLabel {
        region,
        on_boundary: boundaries_at(theta, ell, DEFAULT_REL_TOL),
    })
}

/// One sampled `θ` with the bounding curves evaluated there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub theta: f64,
    /// `4(θ − 1)`
    pub xi_double: f64,
    /// `(θ + 3)²/4`
    pub xi_two: f64,
    pub hat_lower: Option<f64>,
    pub hat_upper: Option<f64>,
}

pub fn boundary_row(theta: f64) -> CurveRow {
    let hats = hat_thresholds(theta);
    CurveRow {
        theta,
        xi_double: 4.0 * (theta - 1.0),
        xi_two: xi_two_curve(theta),
        hat_lower: hats.map(|h| h.0),
        hat_upper: hats.map(|h| h.1),
    }
}

/// Rows on a uniform `θ` grid over `[theta_lo, theta_hi]`, endpoints included.
pub fn boundary_curves(theta_lo: f64, theta_hi: f64, samples: usize) -> Result<Vec<CurveRow>> {
    if !(theta_lo > 0.0 && theta_lo.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "theta_lo",
            value: theta_lo,
            reason: "must be positive and finite",
        });
    }
    if !(theta_hi >= theta_lo && theta_hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "theta_hi",
            value: theta_hi,
            reason: "must be finite and at least theta_lo",
        });
    }
    if samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "need at least two samples",
        });
    }
    let step = (theta_hi - theta_lo) / (samples - 1) as f64;
    Ok((0..samples)
        .map(|k| {
            let theta = if k + 1 == samples {
                theta_hi
            } else {
                theta_lo + step * k as f64
            };
            boundary_row(theta)
        })
        .collect())
}
