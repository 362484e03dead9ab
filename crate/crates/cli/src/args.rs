use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hcfix_core::dynamics::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use hcfix_core::regions::DEFAULT_REL_TOL;

#[derive(Debug, Parser)]
#[command(
    name = "hcfix",
    version,
    about = "Fixed points and regions of the reduced hard-core recursion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region of (theta, L) by the explicit inequalities and by counting.
    #[command(allow_negative_numbers = true)]
    Classify(ClassifyArgs),
    /// Enumerate the fixed points of W, optionally lifted to F.
    #[command(allow_negative_numbers = true)]
    Fixpoints(FixpointsArgs),
    /// Iterate W from a starting point.
    #[command(allow_negative_numbers = true)]
    Iterate(IterateArgs),
    /// Computed (i, j) counts over a parameter grid, as CSV.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// The loci y = psi(x) and x = psi(y), as CSV.
    #[command(allow_negative_numbers = true)]
    Curves(CurvesArgs),
    /// The region boundary curves over a theta range, as CSV.
    #[command(allow_negative_numbers = true)]
    Boundaries(BoundariesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub ell: f64,
    /// Relative tolerance for lying on a boundary curve.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct FixpointsArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub ell: f64,
    /// Also emit the lifted fixed points of the truncated operator F.
    #[arg(long)]
    pub lift: bool,
    /// `geometric:c,r` or a file with one positive real per line.
    #[arg(long, default_value = "geometric:1,0.5")]
    pub lambda_spec: LambdaSpec,
    /// Truncation length for --lift (even).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Cross-check against the grid oracle; exit 3 on mismatch.
    #[arg(long)]
    pub check: bool,
    /// Oracle grid nodes per axis.
    #[arg(long, default_value_t = 400)]
    pub grid_n: usize,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long)]
    pub theta: f64,
    /// Common value of L1 and L2.
    #[arg(long, required_unless_present_all = ["ell1", "ell2"], conflicts_with_all = ["ell1", "ell2"])]
    pub ell: Option<f64>,
    #[arg(long, requires = "ell2")]
    pub ell1: Option<f64>,
    #[arg(long, requires = "ell1")]
    pub ell2: Option<f64>,
    #[arg(long)]
    pub x0: f64,
    #[arg(long)]
    pub y0: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `a:b`
    #[arg(long)]
    pub theta_range: Range,
    /// `a:b`
    #[arg(long)]
    pub ell_range: Range,
    /// `NxM`: N theta nodes by M L nodes, endpoints included.
    #[arg(long, default_value = "50x50")]
    pub grid: Grid,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub ell: f64,
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct BoundariesArgs {
    /// `a:b`
    #[arg(long)]
    pub theta_range: Range,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSpec {
    Geometric { c: f64, r: f64 },
    File(PathBuf),
}

impl std::str::FromStr for LambdaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(rest) = s.strip_prefix("geometric:") else {
            return Ok(LambdaSpec::File(PathBuf::from(s)));
        };
        let (c, r) = rest
            .split_once(',')
            .ok_or_else(|| format!("expected geometric:c,r, got {s:?}"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {v:?}: {e}"))
        };
        Ok(LambdaSpec::Geometric {
            c: parse(c)?,
            r: parse(r)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected a:b, got {s:?}"))?;
        let lo: f64 = a
            .trim()
            .parse()
            .map_err(|e| format!("bad bound {a:?}: {e}"))?;
        let hi: f64 = b
            .trim()
            .parse()
            .map_err(|e| format!("bad bound {b:?}: {e}"))?;
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(format!("range {s:?} must satisfy 0 < a <= b"));
        }
        Ok(Range { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub n: usize,
    pub m: usize,
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected NxM, got {s:?}"))?;
        let n: usize = a
            .trim()
            .parse()
            .map_err(|e| format!("bad size {a:?}: {e}"))?;
        let m: usize = b
            .trim()
            .parse()
            .map_err(|e| format!("bad size {b:?}: {e}"))?;
        if n < 2 || m < 2 {
            return Err(format!("grid {s:?} must be at least 2x2"));
        }
        Ok(Grid { n, m })
    }
}
