//! Domain types and the operators `W`, `F` and the diagonal map `f`.
//!
//! Sequences are truncated to an even length `2n`. The reduction identity
//! `reduce ∘ F = W ∘ reduce` holds exactly for the truncated sums, so the
//! truncated model is treated as exact rather than as an approximation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation half-length `n` (sequences carry `2n` entries).
pub const DEFAULT_HALF_LEN: usize = 32;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        });
    }
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be strictly positive",
        });
    }
    Ok(value)
}

/// Parameters `θ`, `L1`, `L2` of the reduced operator `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    theta: f64,
    ell1: f64,
    ell2: f64,
}

impl ModelParams {
    pub fn new(theta: f64, ell1: f64, ell2: f64) -> Result<Self> {
        Ok(Self {
            theta: positive("theta", theta)?,
            ell1: positive("ell1", ell1)?,
            ell2: positive("ell2", ell2)?,
        })
    }

    /// The `L1 = L2 = L` case, the only one the classification covers.
    pub fn symmetric(theta: f64, ell: f64) -> Result<Self> {
        let ell = positive("ell", ell)?;
        Self::new(theta, ell, ell)
    }

    /// Parameters induced by an activity vector: `L1`, `L2` are its odd and
    /// even sums.
    pub fn from_activity(lam: &ActivityVector, theta: f64) -> Result<Self> {
        Self::new(theta, lam.odd_sum(), lam.even_sum())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn ell1(&self) -> f64 {
        self.ell1
    }

    pub fn ell2(&self) -> f64 {
        self.ell2
    }

    pub fn is_symmetric(&self) -> bool {
        self.ell1 == self.ell2
    }
}

/// A state `(x, y)` of `W` in the closed positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn validate(self) -> Result<Self> {
        if self.x.is_finite() && self.y.is_finite() && self.x >= 0.0 && self.y >= 0.0 {
            Ok(self)
        } else {
            Err(Error::Domain {
                x: self.x,
                y: self.y,
            })
        }
    }

    pub fn swap(self) -> Self {
        Self::new(self.y, self.x)
    }

    pub fn sup_norm(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn sup_dist(self, other: Self) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

/// Sums of the odd (1-indexed) and even positions, accumulated left to right.
fn parity_sums(entries: &[f64]) -> (f64, f64) {
    entries
        .chunks_exact(2)
        .fold((0.0, 0.0), |(odd, even), pair| {
            (odd + pair[0], even + pair[1])
        })
}

fn check_entries(name: &'static str, entries: &[f64]) -> Result<()> {
    if entries.is_empty() || !entries.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name,
            value: entries.len() as f64,
            reason: "length must be even and nonzero",
        });
    }
    for &v in entries {
        positive(name, v)?;
    }
    Ok(())
}

/// Truncated activity sequence `λ = (λ1, …, λ2n)` with its parity sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityVector {
    entries: Vec<f64>,
    odd_sum: f64,
    even_sum: f64,
}

impl ActivityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_entries("lambda", &entries)?;
        let (odd_sum, even_sum) = parity_sums(&entries);
        positive("lambda odd sum", odd_sum)?;
        positive("lambda even sum", even_sum)?;
        Ok(Self {
            entries,
            odd_sum,
            even_sum,
        })
    }

    /// `λ_i = c·r^i` for `i = 1..=len`.
    pub fn geometric(c: f64, r: f64, len: usize) -> Result<Self> {
        positive("c", c)?;
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "must lie in (0, 1)",
            });
        }
        let entries = (1..=len).map(|i| c * r.powi(i as i32)).collect();
        Self::new(entries)
    }

    /// Rescales the odd entries to sum to `ell1` and the even entries to sum
    /// to `ell2`, keeping the shape within each parity class.
    pub fn rescaled(&self, ell1: f64, ell2: f64) -> Result<Self> {
        positive("ell1", ell1)?;
        positive("ell2", ell2)?;
        let (s1, s2) = (ell1 / self.odd_sum, ell2 / self.even_sum);
        let entries = self
            .entries
            .chunks_exact(2)
            .flat_map(|pair| [pair[0] * s1, pair[1] * s2])
            .collect();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn odd_sum(&self) -> f64 {
        self.odd_sum
    }

    pub fn even_sum(&self) -> f64 {
        self.even_sum
    }

    /// The common sum `L` when the parity sums agree within `rel`.
    pub fn symmetric_sum(&self, rel: f64) -> Result<f64> {
        if crate::tol::near(self.odd_sum, self.even_sum, rel) {
            Ok(self.odd_sum)
        } else {
            Err(Error::AsymmetricSums {
                odd: self.odd_sum,
                even: self.even_sum,
            })
        }
    }
}

/// Truncated state `x ∈ l¹₊` with its parity sums `M1`, `M2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinVector {
    entries: Vec<f64>,
    m1: f64,
    m2: f64,
}

impl SpinVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_entries("x", &entries)?;
        let (m1, m2) = parity_sums(&entries);
        Ok(Self { entries, m1, m2 })
    }

    /// Every entry equal to `value`.
    pub fn constant(value: f64, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_dist(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// One application of `W`.
pub fn apply_w(params: &ModelParams, p: Point2) -> Result<Point2> {
    let p = p.validate()?;
    let denom = (1.0 + params.theta) + (p.x + p.y);
    let rx = (1.0 + p.x) / denom;
    let ry = (1.0 + p.y) / denom;
    Ok(Point2::new(params.ell1 * rx * rx, params.ell2 * ry * ry))
}

/// The restriction of `W` to the diagonal: `f(x) = L·((1 + x)/(1 + θ + 2x))²`.
pub fn apply_f_diag(theta: f64, ell: f64, x: f64) -> Result<f64> {
    positive("theta", theta)?;
    positive("ell", ell)?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain { x, y: x });
    }
    let r = (1.0 + x) / (1.0 + theta + 2.0 * x);
    Ok(ell * r * r)
}

/// One application of the truncated operator `F`.
pub fn apply_f_truncated(lam: &ActivityVector, theta: f64, x: &SpinVector) -> Result<SpinVector> {
    positive("theta", theta)?;
    if lam.len() != x.len() {
        return Err(Error::Dimension {
            expected: lam.len(),
            found: x.len(),
        });
    }
    let denom = (1.0 + theta) + (x.m1 + x.m2);
    let r1 = (1.0 + x.m1) / denom;
    let r2 = (1.0 + x.m2) / denom;
    let (s1, s2) = (r1 * r1, r2 * r2);
    let entries = lam
        .entries
        .chunks_exact(2)
        .flat_map(|pair| [pair[0] * s1, pair[1] * s2])
        .collect();
    SpinVector::new(entries)
}

/// `(M1, M2)`: the odd and even partial sums.
pub fn reduce(x: &SpinVector) -> Point2 {
    Point2::new(x.m1, x.m2)
}

/// Reconstructs the sequence-space point `(a/L1·λ1, b/L2·λ2, a/L1·λ3, …)`
/// from a point `(a, b)` of the reduced system.
pub fn lift_point(lam: &ActivityVector, params: &ModelParams, p: Point2) -> Result<SpinVector> {
    if !(p.x > 0.0 && p.y > 0.0 && p.x.is_finite() && p.y.is_finite()) {
        return Err(Error::Domain { x: p.x, y: p.y });
    }
    let (s1, s2) = (p.x / params.ell1, p.y / params.ell2);
    let entries = lam
        .entries
        .chunks_exact(2)
        .flat_map(|pair| [s1 * pair[0], s2 * pair[1]])
        .collect();
    SpinVector::new(entries)
}
