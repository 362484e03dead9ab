//! Trajectories of the dynamical systems generated by `W` and by truncated `F`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    apply_f_truncated, apply_w, reduce, ActivityVector, ModelParams, Point2, SpinVector,
};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Per-step tolerance on `‖reduce(F(x)) − W(reduce(x))‖∞ / (1 + ‖W(reduce(x))‖∞)`.
pub const COMMUTATION_TOL: f64 = 1e-12;

/// Which of the invariant sets `M₋ = {x < y}`, `M₀ = {x = y}`, `M₊ = {x > y}`
/// a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignClass {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Plus,
}

impl SignClass {
    pub fn of(p: Point2) -> SignClass {
        if p.x < p.y {
            SignClass::Minus
        } else if p.x > p.y {
            SignClass::Plus
        } else {
            SignClass::Zero
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SignClass::Minus => "-",
            SignClass::Zero => "0",
            SignClass::Plus => "+",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status<S> {
    Converged { limit: S, steps: usize },
    MaxItersReached,
    InvariantViolation { step: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    /// `points[0]` is the start; `points[t + 1]` is one operator application
    /// after `points[t]`.
    pub points: Vec<S>,
    pub status: Status<S>,
    /// Sign class of the (reduced) starting point, for symmetric parameters.
    pub sign_class: Option<SignClass>,
    /// First step at which an off-diagonal orbit landed exactly on the
    /// diagonal through rounding.
    pub absorbed_at: Option<usize>,
    /// Largest per-step reduction mismatch (zero for `W` trajectories).
    pub max_commutation_error: f64,
}

impl<S> Trajectory<S> {
    pub fn last(&self) -> &S {
        self.points
            .last()
            .expect("trajectory holds its start point")
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

fn check_run(max_iter: usize, tol: f64) -> Result<()> {
    if max_iter == 0 {
        return Err(Error::InvalidParameter {
            name: "max_iter",
            value: 0.0,
            reason: "must be positive",
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

/// Tracks the sign class along a symmetric orbit. Returns `Err(step)` on a
/// genuine class change; a collapse of `x − y` to exactly zero is recorded as
/// an absorption into `M₀`.
struct SignMonitor {
    class: SignClass,
    absorbed_at: Option<usize>,
}

impl SignMonitor {
    fn observe(&mut self, step: usize, p: Point2) -> std::result::Result<(), usize> {
        let now = SignClass::of(p);
        if now == self.class {
            return Ok(());
        }
        if now == SignClass::Zero && self.absorbed_at.is_none() {
            log::debug!("orbit absorbed into the diagonal at step {step}: {p:?}");
            self.absorbed_at = Some(step);
            self.class = SignClass::Zero;
            return Ok(());
        }
        Err(step)
    }
}

/// Iterates `W` from `p0` until the relative sup-norm step drops to `tol` or
/// `max_iter` applications have been made.
pub fn iterate_w(
    params: &ModelParams,
    p0: Point2,
    max_iter: usize,
    tol: f64,
) -> Result<Trajectory<Point2>> {
    check_run(max_iter, tol)?;
    let p0 = p0.validate()?;
    let sign_class = params.is_symmetric().then(|| SignClass::of(p0));
    let mut monitor = sign_class.map(|class| SignMonitor {
        class,
        absorbed_at: None,
    });

    let mut points = Vec::with_capacity(max_iter.min(4096) + 1);
    points.push(p0);
    let mut p = p0;
    let mut status = Status::MaxItersReached;
    for step in 1..=max_iter {
        let q = apply_w(params, p)?;
        points.push(q);
        if let Some(m) = monitor.as_mut() {
            if let Err(step) = m.observe(step, q) {
                status = Status::InvariantViolation { step };
                break;
            }
        }
        if q.sup_dist(p) <= tol * (1.0 + q.sup_norm()) {
            status = Status::Converged {
                limit: q,
                steps: step,
            };
            break;
        }
        p = q;
    }
    Ok(Trajectory {
        points,
        status,
        sign_class,
        absorbed_at: monitor.and_then(|m| m.absorbed_at),
        max_commutation_error: 0.0,
    })
}

/// Iterates truncated `F` from `x0`, checking at every step that the reduced
/// state follows `W`: `reduce(F(x)) = W(reduce(x))` within
/// [`COMMUTATION_TOL`]. A failed check ends the run with
/// [`Status::InvariantViolation`].
pub fn iterate_f(
    lam: &ActivityVector,
    theta: f64,
    x0: &SpinVector,
    max_iter: usize,
    tol: f64,
) -> Result<Trajectory<SpinVector>> {
    check_run(max_iter, tol)?;
    let params = ModelParams::from_activity(lam, theta)?;
    if lam.len() != x0.len() {
        return Err(Error::Dimension {
            expected: lam.len(),
            found: x0.len(),
        });
    }
    let sign_class = params.is_symmetric().then(|| SignClass::of(reduce(x0)));
    let mut monitor = sign_class.map(|class| SignMonitor {
        class,
        absorbed_at: None,
    });

    let mut points = vec![x0.clone()];
    let mut status = Status::MaxItersReached;
    let mut max_err: f64 = 0.0;
    for step in 1..=max_iter {
        let prev = points.last().expect("nonempty");
        let next = apply_f_truncated(lam, theta, prev)?;
        let expected = apply_w(&params, reduce(prev))?;
        let err = reduce(&next).sup_dist(expected) / (1.0 + expected.sup_norm());
        max_err = max_err.max(err);
        let done = next.sup_dist(prev) <= tol * (1.0 + next.sup_norm());
        points.push(next);
        if err > COMMUTATION_TOL {
            status = Status::InvariantViolation { step };
            break;
        }
        if let Some(m) = monitor.as_mut() {
            if let Err(step) = m.observe(step, reduce(points.last().expect("nonempty"))) {
                status = Status::InvariantViolation { step };
                break;
            }
        }
        if done {
            status = Status::Converged {
                limit: points.last().expect("nonempty").clone(),
                steps: step,
            };
            break;
        }
    }
    Ok(Trajectory {
        points,
        status,
        sign_class,
        absorbed_at: monitor.and_then(|m| m.absorbed_at),
        max_commutation_error: max_err,
    })
}
