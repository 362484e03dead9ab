//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcfix_core::closed_form::audit_radical_forms;
use hcfix_core::dynamics::{iterate_w, SignClass, Status};
use hcfix_core::model::{apply_f_truncated, apply_w, reduce};
use hcfix_core::oracle::{oracle_fix_w, OracleConfig};
use hcfix_core::regions::{classify_formula, DEFAULT_REL_TOL};
use hcfix_core::solver::{fix_f, fix_w, hat_thresholds, w_residual};
use hcfix_core::{
    ActivityVector, FixedPointSet, ModelParams, Point2, PointKind, Region, SpinVector,
};

const SAMPLES_PER_REGION: usize = 25;
const MATCH_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-10;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reference_points() -> Verdict {
    let cases: [(f64, f64, f64, Region); 8] = [
        (20.0, 59.0, DEFAULT_REL_TOL, Region::A10),
        (6.0, 90.0, DEFAULT_REL_TOL, Region::A12),
        (19.0, 125.0, DEFAULT_REL_TOL, Region::A22),
        (19.0, 128.0, DEFAULT_REL_TOL, Region::A22),
        (19.0, 98.0, DEFAULT_REL_TOL, Region::A14),
        (19.0, 126.0, DEFAULT_REL_TOL, Region::A32),
        (22.5, 154.0, 1e-2, Region::A24),
        (22.5, 157.0, DEFAULT_REL_TOL, Region::A34),
    ];
    let start = Instant::now();
    for (theta, ell, tol, want) in cases {
        let got = classify_formula(theta, ell, tol).map_err(|e| e.to_string())?;
        ensure(got.region() == Some(want), || {
            format!("({theta}, {ell}) classified {got:?}, expected {want}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("8/8 reference points in {elapsed:.2?}"))
}

fn threshold_exactness() -> Verdict {
    let (lo, hi) = hat_thresholds(19.0).ok_or("thresholds absent at theta=19")?;
    let (e1, e2) = ((lo - 125.0).abs() / 125.0, (hi - 128.0).abs() / 128.0);
    ensure(e1 <= 1e-12 && e2 <= 1e-12, || {
        format!("L̂(19) = ({lo:.17}, {hi:.17})")
    })?;
    Ok(format!(
        "L̂(19) = ({lo}, {hi}), rel errors ({e1:.1e}, {e2:.1e})"
    ))
}

struct Sample {
    theta: f64,
    ell: f64,
    set: FixedPointSet,
}

fn count_law(samples: &mut Vec<Sample>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let cfg = OracleConfig::default();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for region in Region::ALL {
        for _ in 0..SAMPLES_PER_REGION {
            let (theta, ell) = common::sample(&mut rng, region);
            let set = fix_w(theta, ell).map_err(|e| format!("({theta}, {ell}): {e}"))?;
            ensure(set.counts == region.counts(), || {
                format!(
                    "({theta}, {ell}) in {region}: solver counts {:?}",
                    set.counts
                )
            })?;
            let oracle = oracle_fix_w(theta, ell, &cfg).map_err(|e| e.to_string())?;
            ensure(oracle.len() == region.total(), || {
                format!(
                    "({theta}, {ell}) in {region}: oracle found {} points: {oracle:?}",
                    oracle.len()
                )
            })?;
            for fp in set.points() {
                let d = oracle
                    .iter()
                    .map(|q| q.sup_dist(fp.point))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
                ensure(d <= MATCH_TOL, || {
                    format!(
                        "({theta}, {ell}) in {region}: {:?} unmatched, {d:e}",
                        fp.point
                    )
                })?;
            }
            samples.push(Sample { theta, ell, set });
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} samples over 7 regions, max solver/oracle deviation {worst:.2e}, {elapsed:.2?}",
        samples.len()
    ))
}

fn residuals(samples: &[Sample]) -> Verdict {
    ensure(!samples.is_empty(), || {
        "no samples (count-law criterion failed)".into()
    })?;
    let base = ActivityVector::geometric(1.0, 0.5, 64).map_err(|e| e.to_string())?;
    let (mut worst_w, mut worst_f, mut points, mut lifts) = (0.0f64, 0.0f64, 0usize, 0usize);
    for s in samples {
        let params = ModelParams::symmetric(s.theta, s.ell).map_err(|e| e.to_string())?;
        for fp in s.set.points() {
            let r = w_residual(&params, fp.point) / (1.0 + fp.point.sup_norm());
            worst_w = worst_w.max(r);
            points += 1;
            ensure(r <= RESIDUAL_TOL, || {
                format!(
                    "({}, {}): W residual {r:e} at {:?}",
                    s.theta, s.ell, fp.point
                )
            })?;
        }
        let lam = base.rescaled(s.ell, s.ell).map_err(|e| e.to_string())?;
        let lifted = fix_f(&lam, s.theta).map_err(|e| format!("({}, {}): {e}", s.theta, s.ell))?;
        for v in &lifted {
            let fv = apply_f_truncated(&lam, s.theta, v).map_err(|e| e.to_string())?;
            let r = fv.sup_dist(v) / (1.0 + v.sup_norm());
            worst_f = worst_f.max(r);
            lifts += 1;
            ensure(r <= RESIDUAL_TOL, || {
                format!("({}, {}): F residual {r:e}", s.theta, s.ell)
            })?;
        }
    }
    Ok(format!(
        "{points} points (max {worst_w:.1e}), {lifts} lifts at truncation 64 (max {worst_f:.1e})"
    ))
}

fn product_law(samples: &[Sample]) -> Verdict {
    ensure(!samples.is_empty(), || {
        "no samples (count-law criterion failed)".into()
    })?;
    let (mut worst, mut n) = (0.0f64, 0usize);
    for s in samples {
        for fp in s
            .set
            .points()
            .iter()
            .filter(|f| f.kind == PointKind::Offdiag)
        {
            let e = (fp.point.x * fp.point.y - 1.0).abs();
            worst = worst.max(e);
            n += 1;
            ensure(e <= 1e-10, || {
                format!("({}, {}): x*y - 1 = {e:e}", s.theta, s.ell)
            })?;
        }
    }
    Ok(format!(
        "{n} off-diagonal points, max |xy - 1| = {worst:.1e}"
    ))
}

fn commutation() -> Verdict {
    let lam = ActivityVector::geometric(1.0, 0.5, 64).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let theta = rng.gen_range(0.1..40.0);
        let params = ModelParams::from_activity(&lam, theta).map_err(|e| e.to_string())?;
        let entries = (0..64)
            .map(|_| 10f64.powf(rng.gen_range(-4.0..1.0)))
            .collect();
        let mut x = SpinVector::new(entries).map_err(|e| e.to_string())?;
        for step in 0..100 {
            let next = apply_f_truncated(&lam, theta, &x).map_err(|e| e.to_string())?;
            let expected = apply_w(&params, reduce(&x)).map_err(|e| e.to_string())?;
            let err = reduce(&next).sup_dist(expected) / (1.0 + expected.sup_norm());
            worst = worst.max(err);
            ensure(err <= 1e-10, || {
                format!("theta={theta}, step {step}: mismatch {err:e}")
            })?;
            x = next;
        }
    }
    Ok(format!("100 starts x 100 steps, max mismatch {worst:.1e}"))
}

fn random_start<R: Rng>(rng: &mut R, ell: f64, class: SignClass) -> Point2 {
    let mut draw = || ell * 10f64.powf(rng.gen_range(-4.0..0.5));
    let (a, b) = loop {
        let (a, b) = (draw(), draw());
        if a != b {
            break (a.max(b), a.min(b));
        }
    };
    match class {
        SignClass::Plus => Point2::new(a, b),
        SignClass::Minus => Point2::new(b, a),
        SignClass::Zero => Point2::new(a, a),
    }
}

fn sign_preservation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (mut runs, mut absorbed) = (0usize, 0usize);
    for region in Region::ALL {
        let (theta, ell) = common::sample(&mut rng, region);
        let params = ModelParams::symmetric(theta, ell).map_err(|e| e.to_string())?;
        for class in [SignClass::Minus, SignClass::Zero, SignClass::Plus] {
            for _ in 0..100 {
                let p0 = random_start(&mut rng, ell, class);
                let t =
                    iterate_w(&params, p0, 1000, f64::MIN_POSITIVE).map_err(|e| e.to_string())?;
                ensure(
                    !matches!(t.status, Status::InvariantViolation { .. }),
                    || format!("{region} ({theta}, {ell}) from {p0:?}: {:?}", t.status),
                )?;
                let cut = t.absorbed_at.unwrap_or(t.points.len());
                ensure(
                    t.points[..cut].iter().all(|p| SignClass::of(*p) == class),
                    || format!("{region} ({theta}, {ell}) from {p0:?}: class changed"),
                )?;
                ensure(
                    t.points[cut..]
                        .iter()
                        .all(|p| SignClass::of(*p) == SignClass::Zero),
                    || format!("{region} ({theta}, {ell}) from {p0:?}: left the diagonal"),
                )?;
                if t.absorbed_at.is_some() {
                    absorbed += 1;
                }
                if t.absorbed_at.is_some() && absorbed <= 3 {
                    println!(
                        "    note: {region} ({theta:.6}, {ell:.6}) start {p0:?} absorbed into x=y at step {cut}"
                    );
                }
                runs += 1;
            }
        }
    }
    if absorbed > 3 {
        println!("    note: {} further absorptions not listed", absorbed - 3);
    }
    Ok(format!(
        "{runs} runs of 1000 steps over 7 regions, 0 violations, {absorbed} diagonal absorptions"
    ))
}

fn theta_one() -> Verdict {
    for ell in [0.5, 2.0, 4.0] {
        let pts = fix_w(1.0, ell).map_err(|e| e.to_string())?.points();
        let q = ell / 4.0;
        ensure(pts.len() == 1 && pts[0].point == Point2::new(q, q), || {
            format!("L={ell}: {pts:?}")
        })?;
    }
    for ell in [5.0, 10.0, 100.0] {
        let set = fix_w(1.0, ell).map_err(|e| e.to_string())?;
        ensure(set.len() == 3 && set.counts == (1, 2), || {
            format!("L={ell}: counts {:?}", set.counts)
        })?;
        let q = ell / 4.0;
        let d = set.points()[0].point;
        ensure((d.x - q).abs() <= 1e-14 * q && d.x == d.y, || {
            format!("L={ell}: diagonal point {d:?}")
        })?;
    }
    Ok("L in {0.5, 2, 4} -> {(L/4, L/4)}; L in {5, 10, 100} -> 3 points".into())
}

fn radical_audit() -> Verdict {
    let audit = audit_radical_forms(6.0, 90.0).map_err(|e| e.to_string())?;
    for line in audit.report.lines() {
        println!("    {line}");
    }
    ensure(
        audit.derived.len() == 2 && audit.derived.iter().all(|c| c.passes),
        || "xi-route pair fails the residual bound".into(),
    )?;
    let verdict = if audit.report.contains("DISAGREEMENT") {
        "disagreement"
    } else if audit.report.contains("AGREEMENT") {
        "agreement"
    } else {
        return Err("report states neither agreement nor disagreement".into());
    };
    Ok(format!("xi-route pair passes; report states {verdict}"))
}

fn run(name: &str, f: impl FnOnce() -> Verdict) -> bool {
    let verdict = catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|e| Err(format!("panic: {:?}", e.downcast_ref::<String>())));
    match verdict {
        Ok(msg) => {
            println!("[PASS] {name}: {msg}");
            true
        }
        Err(msg) => {
            println!("[FAIL] {name}: {msg}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut samples = Vec::new();
    let results = [
        run("1 reference-point classification", reference_points),
        run("2 threshold exactness", threshold_exactness),
        run("3 count law per region", || count_law(&mut samples)),
        run("4 residuals", || residuals(&samples)),
        run("5 off-diagonal product law", || product_law(&samples)),
        run("6 reduction commutation", commutation),
        run("7 sign-class preservation", sign_preservation),
        run("8 theta=1 degeneracy", theta_one),
        run("9 closed-form audit", radical_audit),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
