use std::sync::Arc;

use crate::calculus::UnitSpeedCurve;
use crate::exprkit::{Jet3, ScalarField};
use crate::{GeomError, Result};

use super::forms::FirstForm;

/// Unit-speed tolerance on `| |β'| − 1 |`.
pub const UNIT_SPEED_TOL: f64 = 1e-6;

/// Parameter-space jets of a surface curve at arc position `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub s: f64,
    pub u: Jet3,
    pub v: Jet3,
    /// Whether `u.d3`, `v.d3` are meaningful.
    pub third_order: bool,
}

impl CurvePoint {
    pub fn up(&self) -> f64 {
        self.u.d1
    }
    pub fn vp(&self) -> f64 {
        self.v.d1
    }
    pub fn upp(&self) -> f64 {
        self.u.d2
    }
    pub fn vpp(&self) -> f64 {
        self.v.d2
    }

    /// The four first/second derivatives `(u′, u″, v′, v″)`.
    pub fn jets(&self) -> CurveJets {
        CurveJets {
            up: self.u.d1,
            upp: self.u.d2,
            vp: self.v.d1,
            vpp: self.v.d2,
        }
    }
}

/// `(u′, u″, v′, v″)` along a curve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveJets {
    pub up: f64,
    pub upp: f64,
    pub vp: f64,
    pub vpp: f64,
}

/// A curve `(u(s), v(s))` in a surface's parameter domain.
#[derive(Debug, Clone)]
pub enum SurfaceCurve {
    /// Closed-form expressions in `s`, assumed unit speed on the owning surface.
    Analytic { u: ScalarField, v: ScalarField },
    /// Numerically reparameterized curve; jets to order 2 only.
    Table(Arc<UnitSpeedCurve>),
}

impl SurfaceCurve {
    pub fn parse(u: &str, v: &str) -> Result<Self> {
        Ok(SurfaceCurve::Analytic {
            u: ScalarField::parse(u, &["s"])?,
            v: ScalarField::parse(v, &["s"])?,
        })
    }

    pub fn point(&self, s: f64) -> Result<CurvePoint> {
        match self {
            SurfaceCurve::Analytic { u, v } => Ok(CurvePoint {
                s,
                u: u.eval_jet3(s)?,
                v: v.eval_jet3(s)?,
                third_order: true,
            }),
            SurfaceCurve::Table(t) => t.point(s),
        }
    }
}

impl From<UnitSpeedCurve> for SurfaceCurve {
    fn from(t: UnitSpeedCurve) -> Self {
        SurfaceCurve::Table(Arc::new(t))
    }
}

/// Speed `|β′|` measured with the metric at the curve point.
pub fn curve_speed(m: &FirstForm, c: &CurvePoint) -> f64 {
    m.quadratic(c.up(), c.vp()).max(0.0).sqrt()
}

pub fn check_unit_speed(m: &FirstForm, c: &CurvePoint) -> Result<()> {
    let speed = curve_speed(m, c);
    if (speed - 1.0).abs() > UNIT_SPEED_TOL {
        return Err(GeomError::NotUnitSpeed { s: c.s, speed });
    }
    Ok(())
}
