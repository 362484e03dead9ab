//! JSON output schema. Every float is written with 17 significant digits so
//! that re-parsing reproduces it bit for bit.

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use hcfix_core::dynamics::SignClass;
use hcfix_core::{Classification, Point2, PointKind, RegionLabel};

pub const SCHEMA_VERSION: &str = "1";

/// A finite float serialized as `{:.16e}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        RawValue::from_string(format!("{:.16e}", self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if v.is_finite() {
            Ok(Num(v))
        } else {
            Err(D::Error::custom("non-finite value"))
        }
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num(v)
    }
}

pub fn pair(p: Point2) -> [Num; 2] {
    [Num(p.x), Num(p.y)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub theta: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell1: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell2: Option<Num>,
}

impl Params {
    pub fn symmetric(theta: f64, ell: f64) -> Self {
        Params {
            theta: Num(theta),
            ell: Some(Num(ell)),
            ell1: None,
            ell2: None,
        }
    }

    pub fn general(theta: f64, ell1: f64, ell2: f64) -> Self {
        Params {
            theta: Num(theta),
            ell: None,
            ell1: Some(Num(ell1)),
            ell2: Some(Num(ell2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionOut {
    /// From the explicit inequalities; may be unassigned.
    pub formula: Classification,
    /// From the computed counts.
    pub computed: RegionLabel,
    pub agree: bool,
    pub rel_tol: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointOut {
    pub kind: PointKind,
    pub x: Num,
    pub y: Num,
    pub residual: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftOut {
    /// Index into `fixed_points`.
    pub source: usize,
    pub residual: Num,
    pub entries: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOut {
    pub oracle_points: Vec<[Num; 2]>,
    pub matched: bool,
    pub max_deviation: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryOut {
    /// `converged`, `max_iters_reached` or `invariant_violation`.
    pub status: String,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<[Num; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation_step: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_class: Option<SignClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absorbed_at: Option<usize>,
    pub points: Vec<[Num; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<Vec<PointOut>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifted: Option<Vec<LiftOut>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryOut>,
}

impl OutputRecord {
    pub fn new(command: &str, params: Params) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION.to_owned(),
            command: command.to_owned(),
            params,
            region: None,
            fixed_points: None,
            lifted: None,
            check: None,
            trajectory: None,
        }
    }
}
