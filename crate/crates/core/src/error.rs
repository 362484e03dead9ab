use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("state ({x}, {y}) is outside the closed positive quadrant or not finite")]
    Domain { x: f64, y: f64 },

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("classification requires L1 == L2, got odd sum {odd} and even sum {even}")]
    AsymmetricSums { odd: f64, even: f64 },

    #[error("fixed point ({x}, {y}) fails the residual check (residual {residual:e})")]
    Residual { x: f64, y: f64, residual: f64 },

    #[error("lifted fixed point {index} fails the residual check (residual {residual:e})")]
    LiftResidual { index: usize, residual: f64 },

    #[error(
        "diagonal root count {found} disagrees with the threshold analysis ({expected}) at θ={theta}, L={ell}"
    )]
    CountMismatch {
        theta: f64,
        ell: f64,
        expected: usize,
        found: usize,
    },

    #[error("fixed-point counts ({i}, {j}) do not name a region")]
    UnknownCounts { i: usize, j: usize },

    #[error("oracle search found no fixed point at θ={theta}, L={ell}")]
    OracleEmpty { theta: f64, ell: f64 },
}
