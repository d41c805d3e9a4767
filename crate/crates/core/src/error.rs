use thiserror::Error;

use crate::exprkit::{EvalError, ParseError};

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("irregular point ({u}, {v}): W = {w:e}")]
    Regularity { u: f64, v: f64, w: f64 },
    #[error("metric not positive definite at ({u}, {v}): E = {e}, G = {g}, EG - F^2 = {det:e}")]
    MetricNotPositive { u: f64, v: f64, e: f64, g: f64, det: f64 },
    #[error("curve is not unit speed at s = {s}: |beta'| = {speed}")]
    NotUnitSpeed { s: f64, speed: f64 },
    #[error("curvature vanishes at s = {s} (kappa = {kappa:e}); Frenet frame undefined")]
    VanishingCurvature { s: f64, kappa: f64 },
    #[error("torsion unavailable: curve is table-backed and carries jets to order 2 only")]
    TorsionUnavailable,
    #[error("zero speed at t = {t} while measuring arc length")]
    ZeroSpeed { t: f64 },
    #[error("cumulative arc length not increasing at sample {index}")]
    NonMonotoneLength { index: usize },
    #[error("not conformal at ({u}, {v}): ratio residuals {residuals:?} exceed {tol:e}")]
    NonConformal { u: f64, v: f64, residuals: [f64; 3], tol: f64 },
    #[error("declared dilation {declared} disagrees with metric ratio {estimated} at ({u}, {v})")]
    DilationMismatch { u: f64, v: f64, declared: f64, estimated: f64 },
    #[error("dilation must be positive, got {zeta} at ({u}, {v})")]
    NonPositiveDilation { u: f64, v: f64, zeta: f64 },
    #[error("ambient map does not carry source onto target at ({u}, {v}): distance {distance:e}")]
    AmbientMismatch { u: f64, v: f64, distance: f64 },
    #[error("pair has no ambient map")]
    MissingAmbientMap,
    #[error("{0} requires an embedded surface patch, not an abstract metric")]
    NotEmbedded(&'static str),
    #[error("parameter out of range: {0}")]
    Invalid(String),
}
