use serde::Serialize;

use crate::exprkit::{Jet2, Scalar, ScalarField};
use crate::{GeomError, Result, Vec3};

use super::forms::FirstForm;

/// Regularity floor on `W = |Ψ_u × Ψ_v|`.
pub const REGULARITY_FLOOR: f64 = 1e-10;
/// Floor on `EG − F²` for abstract metrics.
pub const METRIC_DET_FLOOR: f64 = 1e-20;

/// Closed parameter rectangle `[u0, u1] × [v0, v1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainBox {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl DomainBox {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Result<Self> {
        if !(u.0 < u.1 && v.0 < v.1) || ![u.0, u.1, v.0, v.1].iter().all(|x| x.is_finite()) {
            return Err(GeomError::Invalid(format!("empty domain box u={u:?} v={v:?}")));
        }
        Ok(DomainBox { u, v })
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        (self.u.0..=self.u.1).contains(&u) && (self.v.0..=self.v.1).contains(&v)
    }

    /// `n × n` lattice including the corners, row-major in `v`.
    pub fn lattice(&self, n: usize) -> Vec<(f64, f64)> {
        let lerp = |(a, b): (f64, f64), i: usize| {
            if n <= 1 {
                0.5 * (a + b)
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        (0..n)
            .flat_map(|j| (0..n).map(move |i| (lerp(self.u, i), lerp(self.v, j))))
            .collect()
    }
}

/// Patch position and partials to second order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchJets {
    pub p: Vec3,
    pub pu: Vec3,
    pub pv: Vec3,
    pub puu: Vec3,
    pub puv: Vec3,
    pub pvv: Vec3,
}

impl PatchJets {
    /// `Ψ_u × Ψ_v`, the area-weighted normal.
    pub fn area_normal(&self) -> Vec3 {
        self.pu.cross(&self.pv)
    }
}

/// Embedded coordinate chart `Ψ(u, v) = (x, y, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePatch {
    pub x: ScalarField,
    pub y: ScalarField,
    pub z: ScalarField,
    pub domain: DomainBox,
}

impl SurfacePatch {
    pub fn parse(x: &str, y: &str, z: &str, domain: DomainBox) -> Result<Self> {
        let f = |t: &str| ScalarField::parse(t, &["u", "v"]);
        Ok(SurfacePatch {
            x: f(x)?,
            y: f(y)?,
            z: f(z)?,
            domain,
        })
    }

    pub fn position(&self, u: f64, v: f64) -> Result<Vec3> {
        let [x, y, z] = self.compose(u, v)?;
        Ok(Vec3::new(x, y, z))
    }

    /// Evaluate the chart at any jet type bound to `(u, v)`.
    pub fn compose<S: Scalar>(&self, u: S, v: S) -> Result<[S; 3]> {
        let args = [u, v];
        Ok([
            self.x.eval_with(&args)?,
            self.y.eval_with(&args)?,
            self.z.eval_with(&args)?,
        ])
    }

    pub fn jets(&self, u: f64, v: f64) -> Result<PatchJets> {
        let [x, y, z] = self.compose(Jet2::var_u(u), Jet2::var_v(v))?;
        let pick = |f: fn(&Jet2) -> f64| Vec3::new(f(&x), f(&y), f(&z));
        Ok(PatchJets {
            p: pick(|j| j.value),
            pu: pick(|j| j.du),
            pv: pick(|j| j.dv),
            puu: pick(|j| j.duu),
            puv: pick(|j| j.duv),
            pvv: pick(|j| j.dvv),
        })
    }

    /// Jets at a regular point; fails when `W` falls below the regularity floor.
    pub fn regular_jets(&self, u: f64, v: f64) -> Result<PatchJets> {
        let j = self.jets(u, v)?;
        let w = j.area_normal().norm();
        if !(w > REGULARITY_FLOOR) {
            return Err(GeomError::Regularity { u, v, w });
        }
        Ok(j)
    }
}

/// Bare first fundamental form `(E, F, G)` with no embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractMetric {
    pub e: ScalarField,
    pub f: ScalarField,
    pub g: ScalarField,
    pub domain: DomainBox,
}

impl AbstractMetric {
    pub fn parse(e: &str, f: &str, g: &str, domain: DomainBox) -> Result<Self> {
        let p = |t: &str| ScalarField::parse(t, &["u", "v"]);
        Ok(AbstractMetric {
            e: p(e)?,
            f: p(f)?,
            g: p(g)?,
            domain,
        })
    }
}

/// Anything that yields a first fundamental form with first partials.
pub trait MetricSource {
    fn first_form(&self, u: f64, v: f64) -> Result<FirstForm>;
}

impl MetricSource for SurfacePatch {
    fn first_form(&self, u: f64, v: f64) -> Result<FirstForm> {
        let j = self.regular_jets(u, v)?;
        Ok(FirstForm::from_jets(&j))
    }
}

impl MetricSource for AbstractMetric {
    fn first_form(&self, u: f64, v: f64) -> Result<FirstForm> {
        let e = self.e.eval_jet2(u, v)?;
        let f = self.f.eval_jet2(u, v)?;
        let g = self.g.eval_jet2(u, v)?;
        let det = e.value * g.value - f.value * f.value;
        if !(e.value > 0.0 && g.value > 0.0 && det > METRIC_DET_FLOOR) {
            return Err(GeomError::MetricNotPositive {
                u,
                v,
                e: e.value,
                g: g.value,
                det,
            });
        }
        Ok(FirstForm {
            e: e.value,
            f: f.value,
            g: g.value,
            w: det.sqrt(),
            e_u: e.du,
            e_v: e.dv,
            f_u: f.du,
            f_v: f.dv,
            g_u: g.du,
            g_v: g.dv,
        })
    }
}

/// A surface given either as an embedded chart or as a bare metric.
#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Patch(SurfacePatch),
    Metric(AbstractMetric),
}

impl Surface {
    pub fn domain(&self) -> DomainBox {
        match self {
            Surface::Patch(p) => p.domain,
            Surface::Metric(m) => m.domain,
        }
    }

    pub fn as_patch(&self) -> Option<&SurfacePatch> {
        match self {
            Surface::Patch(p) => Some(p),
            Surface::Metric(_) => None,
        }
    }

    pub fn require_patch(&self, what: &'static str) -> Result<&SurfacePatch> {
        self.as_patch().ok_or(GeomError::NotEmbedded(what))
    }
}

impl MetricSource for Surface {
    fn first_form(&self, u: f64, v: f64) -> Result<FirstForm> {
        match self {
            Surface::Patch(p) => p.first_form(u, v),
            Surface::Metric(m) => m.first_form(u, v),
        }
    }
}

impl From<SurfacePatch> for Surface {
    fn from(p: SurfacePatch) -> Self {
        Surface::Patch(p)
    }
}

impl From<AbstractMetric> for Surface {
    fn from(m: AbstractMetric) -> Self {
        Surface::Metric(m)
    }
}
