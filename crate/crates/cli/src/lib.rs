//! Library half of the `hcfix` command-line tool. Each subcommand renders its
//! output into a [`Report`]; `main` prints it and maps errors to exit codes.

pub mod args;
pub mod output;

use std::fs;

use rayon::prelude::*;
use thiserror::Error;

use hcfix_core::dynamics::{iterate_w, SignClass, Status};
use hcfix_core::model::apply_f_truncated;
use hcfix_core::oracle::{oracle_fix_w, OracleConfig};
use hcfix_core::regions::{boundary_curves, classify_computed, classify_formula};
use hcfix_core::solver::{fix_f, fix_w};
use hcfix_core::{ActivityVector, ModelParams, Point2};

use crate::args::{
    BoundariesArgs, ClassifyArgs, Cli, Command, CurvesArgs, FixpointsArgs, Format, IterateArgs,
    LambdaSpec, SweepArgs,
};
use crate::output::{
    pair, CheckOut, LiftOut, Num, OutputRecord, Params, PointOut, RegionOut, TrajectoryOut,
};

/// Truncation length used by `fixpoints --lift` when `--dim` is absent.
pub const DEFAULT_LIFT_DIM: usize = 64;

/// Per-coordinate agreement required between solver and oracle under `--check`.
pub const CHECK_TOL: f64 = 1e-8;

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] hcfix_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use hcfix_core::Error as E;
        match self {
            CliError::Input(_) => EXIT_INVALID,
            CliError::Core(
                E::InvalidParameter { .. }
                | E::Domain { .. }
                | E::Dimension { .. }
                | E::AsymmetricSums { .. },
            ) => EXIT_INVALID,
            _ => 1,
        }
    }
}

/// Rendered output of one command. `mismatch` is set when `--check` found a
/// disagreement; the output is still complete.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub stdout: String,
    pub mismatch: Option<String>,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            stdout,
            mismatch: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatch.is_some() {
            EXIT_MISMATCH
        } else {
            0
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Classify(a) => classify(a).and_then(|r| json(&r)).map(Report::ok),
        Command::Fixpoints(a) => fixpoints(a),
        Command::Iterate(a) => iterate(a),
        Command::Sweep(a) => sweep(a).map(Report::ok),
        Command::Curves(a) => curves(a).map(Report::ok),
        Command::Boundaries(a) => boundaries(a).map(Report::ok),
    }
}

fn json(record: &OutputRecord) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(record)?;
    s.push('\n');
    Ok(s)
}

fn csv_string<F>(write_rows: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<(), CliError>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    write_rows(&mut w)?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

fn region_out(theta: f64, ell: f64, rel_tol: f64) -> Result<RegionOut, CliError> {
    if !(rel_tol >= 0.0 && rel_tol.is_finite()) {
        return Err(CliError::Input(format!(
            "--rel-tol must be nonnegative and finite, got {rel_tol}"
        )));
    }
    let formula = classify_formula(theta, ell, rel_tol)?;
    let computed = classify_computed(theta, ell)?;
    let agree = formula.region().is_none_or(|r| r == computed.region);
    Ok(RegionOut {
        formula,
        computed,
        agree,
        rel_tol: Num(rel_tol),
    })
}

pub fn classify(a: &ClassifyArgs) -> Result<OutputRecord, CliError> {
    let mut rec = OutputRecord::new("classify", Params::symmetric(a.theta, a.ell));
    rec.region = Some(region_out(a.theta, a.ell, a.rel_tol)?);
    Ok(rec)
}

/// Reads the activity vector named by `spec`; each parity class is rescaled
/// to sum to `ell`.
pub fn load_activity(
    spec: &LambdaSpec,
    dim: Option<usize>,
    ell: f64,
) -> Result<ActivityVector, CliError> {
    let raw = match spec {
        LambdaSpec::Geometric { c, r } => {
            ActivityVector::geometric(*c, *r, dim.unwrap_or(DEFAULT_LIFT_DIM))?
        }
        LambdaSpec::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let entries = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(|l| {
                    l.parse::<f64>()
                        .map_err(|e| CliError::Input(format!("bad activity {l:?}: {e}")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            if let Some(d) = dim {
                if d != entries.len() {
                    return Err(CliError::Input(format!(
                        "--dim {d} does not match {} entries in {}",
                        entries.len(),
                        path.display()
                    )));
                }
            }
            ActivityVector::new(entries)?
        }
    };
    Ok(raw.rescaled(ell, ell)?)
}

/// Compares `solver` with the grid oracle, point by point at [`CHECK_TOL`].
pub fn oracle_check(
    theta: f64,
    ell: f64,
    solver: &[Point2],
    grid_n: usize,
) -> Result<CheckOut, CliError> {
    let cfg = OracleConfig {
        grid_n,
        ..OracleConfig::default()
    };
    let oracle = oracle_fix_w(theta, ell, &cfg)?;
    let mut max_dev: f64 = 0.0;
    let mut matched = oracle.len() == solver.len();
    for p in solver {
        let d = oracle
            .iter()
            .map(|q| q.sup_dist(*p))
            .fold(f64::INFINITY, f64::min);
        max_dev = max_dev.max(d);
        matched &= d <= CHECK_TOL;
    }
    Ok(CheckOut {
        oracle_points: oracle.iter().copied().map(pair).collect(),
        matched,
        max_deviation: Num(if max_dev.is_finite() {
            max_dev
        } else {
            f64::MAX
        }),
    })
}

pub fn fixpoints_record(a: &FixpointsArgs) -> Result<OutputRecord, CliError> {
    let set = fix_w(a.theta, a.ell)?;
    let points = set.points();
    let mut rec = OutputRecord::new("fixpoints", Params::symmetric(a.theta, a.ell));
    rec.region = Some(region_out(a.theta, a.ell, a.rel_tol)?);
    rec.fixed_points = Some(
        points
            .iter()
            .map(|fp| PointOut {
                kind: fp.kind,
                x: Num(fp.point.x),
                y: Num(fp.point.y),
                residual: Num(fp.residual),
            })
            .collect(),
    );
    if a.lift {
        let lam = load_activity(&a.lambda_spec, a.dim, a.ell)?;
        let lifted = fix_f(&lam, a.theta)?;
        rec.lifted = Some(
            lifted
                .iter()
                .enumerate()
                .map(|(source, v)| {
                    let residual = apply_f_truncated(&lam, a.theta, v)?.sup_dist(v);
                    Ok(LiftOut {
                        source,
                        residual: Num(residual),
                        entries: v.entries().iter().copied().map(Num).collect(),
                    })
                })
                .collect::<Result<_, CliError>>()?,
        );
    }
    if a.check {
        let pts: Vec<Point2> = points.iter().map(|f| f.point).collect();
        rec.check = Some(oracle_check(a.theta, a.ell, &pts, a.grid_n)?);
    }
    Ok(rec)
}

fn fixpoints(a: &FixpointsArgs) -> Result<Report, CliError> {
    let rec = fixpoints_record(a)?;
    let mismatch = rec.check.as_ref().filter(|c| !c.matched).map(|c| {
        format!(
            "solver and oracle disagree: {} solver points, {} oracle points, max deviation {:e}",
            rec.fixed_points.as_ref().map_or(0, Vec::len),
            c.oracle_points.len(),
            c.max_deviation.0
        )
    });
    let stdout = match a.format {
        Format::Json => json(&rec)?,
        Format::Csv => csv_string(|w| {
            w.write_record(["kind", "x", "y", "residual"])?;
            for p in rec.fixed_points.iter().flatten() {
                let kind = match p.kind {
                    hcfix_core::PointKind::Diagonal => "diagonal",
                    hcfix_core::PointKind::Offdiag => "offdiag",
                };
                w.write_record([
                    kind.to_owned(),
                    fmt17(p.x.0),
                    fmt17(p.y.0),
                    fmt17(p.residual.0),
                ])?;
            }
            Ok(())
        })?,
    };
    Ok(Report { stdout, mismatch })
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn iterate_record(a: &IterateArgs) -> Result<OutputRecord, CliError> {
    let (params, rec_params) = match (a.ell, a.ell1, a.ell2) {
        (Some(ell), _, _) => (
            ModelParams::symmetric(a.theta, ell)?,
            Params::symmetric(a.theta, ell),
        ),
        (None, Some(l1), Some(l2)) => (
            ModelParams::new(a.theta, l1, l2)?,
            Params::general(a.theta, l1, l2),
        ),
        _ => {
            return Err(CliError::Input(
                "give --ell or both --ell1 and --ell2".into(),
            ))
        }
    };
    let t = iterate_w(&params, Point2::new(a.x0, a.y0), a.max_iter, a.tol)?;
    let (status, limit, violation_step) = match &t.status {
        Status::Converged { limit, .. } => ("converged", Some(pair(*limit)), None),
        Status::MaxItersReached => ("max_iters_reached", None, None),
        Status::InvariantViolation { step } => ("invariant_violation", None, Some(*step)),
    };
    let mut rec = OutputRecord::new("iterate", rec_params);
    rec.trajectory = Some(TrajectoryOut {
        status: status.to_owned(),
        steps: t.steps(),
        limit,
        violation_step,
        sign_class: t.sign_class,
        absorbed_at: t.absorbed_at,
        points: t.points.iter().copied().map(pair).collect(),
    });
    Ok(rec)
}

fn iterate(a: &IterateArgs) -> Result<Report, CliError> {
    let rec = iterate_record(a)?;
    let stdout = match a.format {
        Format::Json => json(&rec)?,
        Format::Csv => csv_string(|w| {
            w.write_record(["step", "x", "y", "sign"])?;
            let traj = rec.trajectory.as_ref().expect("iterate sets a trajectory");
            for (step, [x, y]) in traj.points.iter().enumerate() {
                let sign = SignClass::of(Point2::new(x.0, y.0)).symbol();
                w.write_record([step.to_string(), fmt17(x.0), fmt17(y.0), sign.to_owned()])?;
            }
            Ok(())
        })?,
    };
    Ok(Report::ok(stdout))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// One sweep cell: `(θ, L, i, j)`.
pub type SweepCell = (f64, f64, usize, usize);

/// Computed counts over the grid, ordered by `θ` then `L`.
pub fn sweep_cells(a: &SweepArgs) -> Result<Vec<SweepCell>, CliError> {
    let thetas = linspace(a.theta_range.lo, a.theta_range.hi, a.grid.n);
    let ells = linspace(a.ell_range.lo, a.ell_range.hi, a.grid.m);
    let cells: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| ells.iter().map(move |&l| (t, l)))
        .collect();
    cells
        .par_iter()
        .map(|&(t, l)| {
            let label = classify_computed(t, l)?;
            Ok((t, l, label.i(), label.j()))
        })
        .collect()
}

fn sweep(a: &SweepArgs) -> Result<String, CliError> {
    let cells = sweep_cells(a)?;
    csv_string(|w| {
        w.write_record(["theta", "ell", "i", "j"])?;
        for (t, l, i, j) in cells {
            w.serialize((t, l, i, j))?;
        }
        Ok(())
    })
}

fn curves(a: &CurvesArgs) -> Result<String, CliError> {
    let rows = hcfix_core::curves::loci(a.theta, a.ell, a.samples)?;
    csv_string(|w| {
        for r in rows {
            w.serialize(r)?;
        }
        Ok(())
    })
}

fn boundaries(a: &BoundariesArgs) -> Result<String, CliError> {
    let rows = boundary_curves(a.theta_range.lo, a.theta_range.hi, a.samples)?;
    csv_string(|w| {
        for r in rows {
            w.serialize(r)?;
        }
        Ok(())
    })
}
