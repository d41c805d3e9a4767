use serde::Serialize;

use crate::{Result, Vec3};

use super::surface::{MetricSource, PatchJets, SurfacePatch};

/// `E, F, G` at a point together with their first partials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `√(EG − F²)`
    pub w: f64,
    pub e_u: f64,
    pub e_v: f64,
    pub f_u: f64,
    pub f_v: f64,
    pub g_u: f64,
    pub g_v: f64,
}

impl FirstForm {
    /// Product-rule metric partials from patch jets. `W` is taken from the
    /// cross product, which avoids cancellation in `EG − F²`.
    pub fn from_jets(j: &PatchJets) -> Self {
        FirstForm {
            e: j.pu.dot(&j.pu),
            f: j.pu.dot(&j.pv),
            g: j.pv.dot(&j.pv),
            w: j.area_normal().norm(),
            e_u: 2.0 * j.pu.dot(&j.puu),
            e_v: 2.0 * j.pu.dot(&j.puv),
            f_u: j.puu.dot(&j.pv) + j.pu.dot(&j.puv),
            f_v: j.puv.dot(&j.pv) + j.pu.dot(&j.pvv),
            g_u: 2.0 * j.pv.dot(&j.puv),
            g_v: 2.0 * j.pv.dot(&j.pvv),
        }
    }

    /// `W²`.
    pub fn w2(&self) -> f64 {
        self.w * self.w
    }

    /// Squared length of the parameter-space velocity `(du, dv)`.
    pub fn quadratic(&self, du: f64, dv: f64) -> f64 {
        self.e * du * du + 2.0 * self.f * du * dv + self.g * dv * dv
    }
}

/// Second fundamental form against the unit normal `Ψ_u × Ψ_v / W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondForm {
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub normal: [f64; 3],
}

impl SecondForm {
    pub fn from_jets(j: &PatchJets) -> Self {
        let nrm = j.area_normal().normalize();
        SecondForm {
            l: j.puu.dot(&nrm),
            m: j.puv.dot(&nrm),
            n: j.pvv.dot(&nrm),
            normal: nrm.into(),
        }
    }

    pub fn normal_vec(&self) -> Vec3 {
        Vec3::from(self.normal)
    }
}

/// Christoffel symbols of the second kind. Field `gijk` holds `Γ^k_ij`;
/// `Γ^k_21` shares the `Γ^k_12` slot.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ChristoffelSet {
    pub g111: f64,
    pub g112: f64,
    pub g121: f64,
    pub g122: f64,
    pub g221: f64,
    pub g222: f64,
}

impl ChristoffelSet {
    /// Slots in field order `Γ¹₁₁, Γ²₁₁, Γ¹₁₂, Γ²₁₂, Γ¹₂₂, Γ²₂₂`.
    pub fn to_array(self) -> [f64; 6] {
        [self.g111, self.g112, self.g121, self.g122, self.g221, self.g222]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        ChristoffelSet {
            g111: a[0],
            g112: a[1],
            g121: a[2],
            g122: a[3],
            g221: a[4],
            g222: a[5],
        }
    }
}

pub fn first_fundamental(p: &SurfacePatch, u: f64, v: f64) -> Result<FirstForm> {
    p.first_form(u, v)
}

pub fn second_fundamental(p: &SurfacePatch, u: f64, v: f64) -> Result<SecondForm> {
    Ok(SecondForm::from_jets(&p.regular_jets(u, v)?))
}

/// The six `Γ^k_ij` from a first form and its partials.
pub fn christoffel(m: &FirstForm) -> ChristoffelSet {
    let FirstForm {
        e,
        f,
        g,
        e_u,
        e_v,
        f_u,
        f_v,
        g_u,
        g_v,
        ..
    } = *m;
    let d = 2.0 * m.w2();
    ChristoffelSet {
        g111: (g * e_u - 2.0 * f * f_u + f * e_v) / d,
        g112: (2.0 * e * f_u - e * e_v - f * e_u) / d,
        g121: (g * e_v - f * g_u) / d,
        g122: (e * g_u - f * e_v) / d,
        g221: (2.0 * g * f_v - g * g_u - f * g_v) / d,
        g222: (e * g_v - 2.0 * f * f_v + f * g_u) / d,
    }
}

/// Absolute residuals of the six dot-product identities between second
/// partials of the chart and first partials of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricDerivativeResiduals {
    /// `Ψ_uu·Ψ_u = E_u/2`
    pub uu_u: f64,
    /// `Ψ_uu·Ψ_v = F_u − E_v/2`
    pub uu_v: f64,
    /// `Ψ_vv·Ψ_v = G_v/2`
    pub vv_v: f64,
    /// `Ψ_vv·Ψ_u = F_v − G_u/2`
    pub vv_u: f64,
    /// `Ψ_uv·Ψ_v = G_u/2`
    pub uv_v: f64,
    /// `Ψ_uv·Ψ_u = E_v/2`
    pub uv_u: f64,
}

impl MetricDerivativeResiduals {
    pub fn to_array(self) -> [f64; 6] {
        [self.uu_u, self.uu_v, self.vv_v, self.vv_u, self.uv_v, self.uv_u]
    }

    pub fn max(self) -> f64 {
        self.to_array().into_iter().fold(0.0, f64::max)
    }
}

/// Residuals of the metric-derivative identities given independent metric partials.
pub fn metric_derivative_residuals(j: &PatchJets, m: &FirstForm) -> MetricDerivativeResiduals {
    MetricDerivativeResiduals {
        uu_u: (j.puu.dot(&j.pu) - m.e_u / 2.0).abs(),
        uu_v: (j.puu.dot(&j.pv) - (m.f_u - m.e_v / 2.0)).abs(),
        vv_v: (j.pvv.dot(&j.pv) - m.g_v / 2.0).abs(),
        vv_u: (j.pvv.dot(&j.pu) - (m.f_v - m.g_u / 2.0)).abs(),
        uv_v: (j.puv.dot(&j.pv) - m.g_u / 2.0).abs(),
        uv_u: (j.puv.dot(&j.pu) - m.e_v / 2.0).abs(),
    }
}

pub fn metric_derivative_identities(
    p: &SurfacePatch,
    u: f64,
    v: f64,
) -> Result<MetricDerivativeResiduals> {
    let j = p.regular_jets(u, v)?;
    Ok(metric_derivative_residuals(&j, &FirstForm::from_jets(&j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::GeomError;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn plane_forms() {
        let p = fixtures::plane();
        let m = first_fundamental(&p, 0.3, -0.4).unwrap();
        assert_eq!((m.e, m.f, m.g, m.w), (1.0, 0.0, 1.0, 1.0));
        assert_eq!([m.e_u, m.e_v, m.f_u, m.f_v, m.g_u, m.g_v], [0.0; 6]);
        let s = second_fundamental(&p, 0.3, -0.4).unwrap();
        assert_eq!((s.l, s.m, s.n), (0.0, 0.0, 0.0));
        assert_eq!(christoffel(&m), ChristoffelSet::default());
        assert_eq!(metric_derivative_identities(&p, 0.1, 0.2).unwrap().max(), 0.0);
    }

    #[test]
    fn sphere_first_form() {
        let m = first_fundamental(&fixtures::unit_sphere(), 1.0, FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(m.e, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.f, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.g, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.e_v, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.w, 2f64.sqrt() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_patch_is_rejected() {
        let p = SurfacePatch::parse("u", "u", "0", fixtures::unit_box()).unwrap();
        assert!(matches!(
            first_fundamental(&p, 0.2, 0.2),
            Err(GeomError::Regularity { .. })
        ));
        assert!(second_fundamental(&p, 0.2, 0.2).is_err());
    }

    #[test]
    fn sphere_and_cylinder_second_forms() {
        let s = second_fundamental(&fixtures::unit_sphere(), 1.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(s.l.abs(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.m, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.n.abs(), 1.0, epsilon = 1e-14);
        let c = SurfacePatch::parse("cos(u)", "sin(u)", "v", fixtures::unit_box()).unwrap();
        let s = second_fundamental(&c, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(s.l.abs(), 1.0, epsilon = 1e-14);
        assert_eq!((s.m, s.n), (0.0, 0.0));
        assert_abs_diff_eq!(s.normal_vec().norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sphere_christoffel() {
        let m = first_fundamental(&fixtures::unit_sphere(), 0.7, FRAC_PI_4).unwrap();
        let c = christoffel(&m);
        assert_abs_diff_eq!(c.g121, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.g112, -0.5, epsilon = 1e-14);
        for x in [c.g111, c.g122, c.g221, c.g222] {
            assert_abs_diff_eq!(x, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn exponential_metric_christoffel() {
        let m = fixtures::exp_scaled_metric().first_form(0.0, 0.4).unwrap();
        let c = christoffel(&m);
        assert_eq!(c.to_array(), [1.0, 0.0, 0.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn christoffel_general_metric_has_f_terms() {
        // Skew metric with F != 0: compare against Γ^k_ij = g^{kl} Γ_{ijl}.
        let m = FirstForm {
            e: 2.0, f: 0.5, g: 1.5, w: (2.0f64 * 1.5 - 0.25).sqrt(),
            e_u: 0.3, e_v: -0.2, f_u: 0.7, f_v: 0.1, g_u: -0.4, g_v: 0.9,
        };
        let c = christoffel(&m);
        // first kind: Γ_{ij,l}
        let g11_1 = m.e_u / 2.0;
        let g11_2 = m.f_u - m.e_v / 2.0;
        let g12_1 = m.e_v / 2.0;
        let g12_2 = m.g_u / 2.0;
        let g22_1 = m.f_v - m.g_u / 2.0;
        let g22_2 = m.g_v / 2.0;
        let det = m.e * m.g - m.f * m.f;
        let (i11, i12, i22) = (m.g / det, -m.f / det, m.e / det);
        let raise = |a: f64, b: f64| (i11 * a + i12 * b, i12 * a + i22 * b);
        let (a, b) = raise(g11_1, g11_2);
        assert_abs_diff_eq!(c.g111, a, epsilon = 1e-14);
        assert_abs_diff_eq!(c.g112, b, epsilon = 1e-14);
        let (a, b) = raise(g12_1, g12_2);
        assert_abs_diff_eq!(c.g121, a, epsilon = 1e-14);
        assert_abs_diff_eq!(c.g122, b, epsilon = 1e-14);
        let (a, b) = raise(g22_1, g22_2);
        assert_abs_diff_eq!(c.g221, a, epsilon = 1e-14);
        assert_abs_diff_eq!(c.g222, b, epsilon = 1e-14);
    }
}
