use serde::{Deserialize, Serialize};

use crate::exprkit::Jet3;
use crate::{GeomError, Result, Vec3};

use super::curve::{check_unit_speed, CurvePoint, SurfaceCurve};
use super::forms::{christoffel, ChristoffelSet, FirstForm, SecondForm};
use super::surface::{MetricSource, SurfacePatch};

/// Below this curvature the principal normal is treated as undefined.
pub const CURVATURE_FLOOR: f64 = 1e-9;

/// Frenet data along a unit-speed curve. `n`, `b` and `tau` are absent when
/// the curvature is below [`CURVATURE_FLOOR`]; `tau` is also absent for
/// table-backed curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    pub s: f64,
    pub beta: Vec3,
    pub t: Vec3,
    /// `β″`
    pub accel: Vec3,
    pub kappa: f64,
    pub n: Option<Vec3>,
    pub b: Option<Vec3>,
    pub tau: Option<f64>,
    third_order: bool,
}

impl FrameData {
    /// `(n, b)`, or the vanishing-curvature error.
    pub fn normal_pair(&self) -> Result<(Vec3, Vec3)> {
        match (self.n, self.b) {
            (Some(n), Some(b)) => Ok((n, b)),
            _ => Err(GeomError::VanishingCurvature {
                s: self.s,
                kappa: self.kappa,
            }),
        }
    }

    pub fn torsion(&self) -> Result<f64> {
        self.normal_pair()?;
        if !self.third_order {
            return Err(GeomError::TorsionUnavailable);
        }
        Ok(self.tau.expect("torsion populated with third-order jets"))
    }
}

/// Position and its first three `s`-derivatives along `Ψ(u(s), v(s))`.
pub fn compose_curve(p: &SurfacePatch, c: &CurvePoint) -> Result<[Vec3; 4]> {
    let [x, y, z] = p.compose(c.u, c.v)?;
    let pick = |f: fn(&Jet3) -> f64| Vec3::new(f(&x), f(&y), f(&z));
    Ok([
        pick(|j| j.value),
        pick(|j| j.d1),
        pick(|j| j.d2),
        pick(|j| j.d3),
    ])
}

pub fn frenet(p: &SurfacePatch, c: &SurfaceCurve, s: f64) -> Result<FrameData> {
    let cp = c.point(s)?;
    frenet_at(p, &cp)
}

pub fn frenet_at(p: &SurfacePatch, cp: &CurvePoint) -> Result<FrameData> {
    let m = p.first_form(cp.u.value, cp.v.value)?;
    check_unit_speed(&m, cp)?;
    let [beta, t, accel, jerk] = compose_curve(p, cp)?;
    let kappa = accel.norm();
    let mut frame = FrameData {
        s: cp.s,
        beta,
        t,
        accel,
        kappa,
        n: None,
        b: None,
        tau: None,
        third_order: cp.third_order,
    };
    if kappa > CURVATURE_FLOOR {
        let n = accel / kappa;
        let b = t.cross(&n);
        frame.n = Some(n);
        frame.b = Some(b);
        if cp.third_order {
            // τ = −b′·n = (β′ × β″)·β‴ / κ²
            frame.tau = Some(t.cross(&accel).dot(&jerk) / (kappa * kappa));
        }
    }
    Ok(frame)
}

/// `κ_n = u′²L + 2u′v′M + v′²N` against the unit normal.
pub fn normal_curvature_from(sf: &SecondForm, cp: &CurvePoint) -> f64 {
    let (up, vp) = (cp.up(), cp.vp());
    up * up * sf.l + 2.0 * up * vp * sf.m + vp * vp * sf.n
}

pub fn normal_curvature(p: &SurfacePatch, c: &SurfaceCurve, s: f64) -> Result<f64> {
    let cp = c.point(s)?;
    let j = p.regular_jets(cp.u.value, cp.v.value)?;
    check_unit_speed(&FirstForm::from_jets(&j), &cp)?;
    Ok(normal_curvature_from(&SecondForm::from_jets(&j), &cp))
}

/// Power of `W` multiplying the Beltrami bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weight {
    /// `W = √(EG − F²)`, the geometric convention.
    W1,
    /// `W²`.
    W2,
}

impl Weight {
    pub const ALL: [Weight; 2] = [Weight::W1, Weight::W2];

    pub fn apply(self, w: f64) -> f64 {
        match self {
            Weight::W1 => w,
            Weight::W2 => w * w,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Weight::W1 => "W1",
            Weight::W2 => "W2",
        }
    }
}

/// The cubic connection terms shared by the Beltrami bracket and its
/// conformal shift: `c112 u′³ + (2c122 − c111) u′²v′ + (c222 − 2c121) u′v′² − c221 v′³`.
pub fn connection_cubic(c: &[f64; 6], up: f64, vp: f64) -> f64 {
    let [c111, c112, c121, c122, c221, c222] = *c;
    c112 * up * up * up + (2.0 * c122 - c111) * up * up * vp + (c222 - 2.0 * c121) * up * vp * vp
        - c221 * vp * vp * vp
}

/// Beltrami bracket: connection cubic plus `u′v″ − u″v′`.
pub fn beltrami_bracket(ch: &ChristoffelSet, cp: &CurvePoint) -> f64 {
    connection_cubic(&ch.to_array(), cp.up(), cp.vp()) + cp.up() * cp.vpp() - cp.upp() * cp.vp()
}

pub fn geodesic_curvature_at(m: &FirstForm, cp: &CurvePoint, weight: Weight) -> Result<f64> {
    check_unit_speed(m, cp)?;
    Ok(beltrami_bracket(&christoffel(m), cp) * weight.apply(m.w))
}

/// Geodesic curvature by the Beltrami formula, scaled by `W` or `W²`.
pub fn geodesic_curvature<M: MetricSource + ?Sized>(
    m: &M,
    c: &SurfaceCurve,
    s: f64,
    weight: Weight,
) -> Result<f64> {
    let cp = c.point(s)?;
    let ff = m.first_form(cp.u.value, cp.v.value)?;
    geodesic_curvature_at(&ff, &cp, weight)
}
