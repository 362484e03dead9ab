//! Parameter samplers shared by the integration tests.
#![allow(dead_code)]

use hcfix_core::regions::theta_tangency;
use hcfix_core::solver::{hat_thresholds, xi_two_curve};
use hcfix_core::Region;
use rand::Rng;

fn xi_double(theta: f64) -> f64 {
    4.0 * (theta - 1.0)
}

fn hats(theta: f64) -> (f64, f64) {
    hat_thresholds(theta).expect("theta above the cusp")
}

/// A point strictly between `lo` and `hi`, kept at least 5% of the width away
/// from either end.
fn inside<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen_range(0.05..0.95)
}

/// A pseudo-random `(θ, L)` in `region`. Open regions are sampled away from
/// their boundary curves; the measure-zero regions are sampled exactly on
/// their defining curve.
pub fn sample<R: Rng>(rng: &mut R, region: Region) -> (f64, f64) {
    let tan = theta_tangency();
    match region {
        Region::A10 => {
            if rng.gen_bool(0.5) {
                let t = rng.gen_range(0.2..5.0);
                (t, inside(rng, 0.05, xi_two_curve(t)))
            } else {
                let t = rng.gen_range(5.2..40.0);
                (t, inside(rng, 0.05, xi_double(t)))
            }
        }
        Region::A12 => {
            if rng.gen_bool(0.5) {
                let t = rng.gen_range(0.2..17.0);
                let c = xi_two_curve(t);
                (t, inside(rng, c, 3.0 * c))
            } else {
                let t = rng.gen_range(17.5..40.0);
                let (_, hi) = hats(t);
                (t, inside(rng, hi, 2.0 * hi))
            }
        }
        Region::A22 => {
            if rng.gen_bool(0.5) {
                let t = rng.gen_range(17.5..40.0);
                (t, hats(t).1)
            } else {
                let t = rng.gen_range(17.5..tan - 0.3);
                (t, hats(t).0)
            }
        }
        Region::A14 => {
            if rng.gen_bool(0.5) {
                let t = rng.gen_range(5.5..tan);
                (t, inside(rng, xi_double(t), xi_two_curve(t)))
            } else {
                let t = rng.gen_range(tan..40.0);
                (t, inside(rng, xi_double(t), hats(t).0))
            }
        }
        Region::A32 => {
            if rng.gen_bool(0.5) {
                let t = rng.gen_range(18.0..tan);
                let (lo, hi) = hats(t);
                (t, inside(rng, lo, hi))
            } else {
                let t = rng.gen_range(tan + 0.5..40.0);
                (t, inside(rng, xi_two_curve(t), hats(t).1))
            }
        }
        Region::A24 => {
            let t = rng.gen_range(tan + 0.5..40.0);
            (t, hats(t).0)
        }
        Region::A34 => {
            let t = rng.gen_range(tan + 0.5..40.0);
            (t, inside(rng, hats(t).0, xi_two_curve(t)))
        }
    }
}
