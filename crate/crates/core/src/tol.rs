//! Tolerance-aware comparisons shared by the solver and the classifier.

/// Relative width of the band around a bifurcation curve inside which counts
/// come from parameter comparisons instead of numerical root separation.
pub(crate) const BOUNDARY_REL_TOL: f64 = 1e-12;

/// Residual bound every emitted fixed point must meet, scaled by `1 + ‖p‖∞`.
pub(crate) const RESIDUAL_TOL: f64 = 1e-10;

/// Absolute coordinate distance below which two fixed points are the same.
pub(crate) const DEDUP_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn near(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Ordering of `a` against `b` with a relative equality band.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cmp {
    pub rel: f64,
}

impl Cmp {
    pub fn eq(self, a: f64, b: f64) -> bool {
        near(a, b, self.rel)
    }
    pub fn lt(self, a: f64, b: f64) -> bool {
        a < b && !self.eq(a, b)
    }
    pub fn le(self, a: f64, b: f64) -> bool {
        a < b || self.eq(a, b)
    }
    pub fn gt(self, a: f64, b: f64) -> bool {
        self.lt(b, a)
    }
    pub fn ge(self, a: f64, b: f64) -> bool {
        self.le(b, a)
    }
}
