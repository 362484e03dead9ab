//! Fixed points of a countable-spin hard-core operator.
//!
//! The infinite-dimensional operator `F` acting on strictly positive summable
//! sequences collapses, through the odd/even partial sums of its argument, onto
//! the two-dimensional operator
//!
//! ```text
//! W(x, y) = ( L1 * ((1 + x) / (1 + θ + x + y))^2,
//!             L2 * ((1 + y) / (1 + θ + x + y))^2 )
//! ```
//!
//! Every fixed point of `W` lifts to exactly one fixed point of `F`, and for
//! `L1 = L2 = L` the fixed points of `W` are enumerated in closed form: up to
//! three on the diagonal (roots of a cubic in `u = √x`) and up to two
//! off-diagonal pairs with `x·y = 1` (roots of a quadratic in `ξ = u + 1/u`).
//!
//! Modules:
//!
//! * [`model`]: domain types, the operators `W`, `F` (truncated), the diagonal
//!   map, reduction and lifting.
//! * [`solver`]: closed-form enumeration of `Fix(W)` and its lift to `Fix(F)`.
//! * [`closed_form`]: Cardano and nested-radical evaluations used as audits.
//! * [`regions`]: the seven-region classification of `(θ, L)`.
//! * [`oracle`]: structure-blind brute-force fixed-point search.
//! * [`dynamics`]: trajectories of `W` and `F`.
//! * [`curves`]: the loci `y = ψ(x)` and `x = ψ(y)` whose intersections are
//!   the fixed points.

pub mod closed_form;
pub mod curves;
pub mod dynamics;
mod error;
pub mod model;
pub mod oracle;
pub mod regions;
pub mod solver;
mod tol;

pub use error::{Error, Result};
pub use model::{ActivityVector, ModelParams, Point2, SpinVector};
pub use regions::{BoundaryCurve, Classification, Region, RegionLabel};
pub use solver::{DiagonalRoots, FixedPoint, FixedPointSet, OffDiagPairs, PointKind};
