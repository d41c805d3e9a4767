//! Normal curves and their images under a conformal map.
//!
//! A normal curve has position vector in the normal plane of its Frenet
//! frame, `β = ν n + η b`. Components against the surface normal here use
//! the area-weighted normal `Ñ = Ψ_u × Ψ_v`, with the matching normal
//! curvature `κ_n^w = u′²(Ψ_uu·Ñ) + 2u′v′(Ψ_uv·Ñ) + v′²(Ψ_vv·Ñ) = W κ_n`.

use serde::{Deserialize, Serialize};

use crate::conformal::{g_functions, h_function, theta_terms, ConformalPair};
use crate::exprkit::ScalarField;
use crate::geometry::{
    beltrami_bracket, check_unit_speed, christoffel, frenet_at, first_fundamental, CurvePoint,
    FirstForm, PatchJets, SurfaceCurve, SurfacePatch, CURVATURE_FLOOR,
};
use crate::{GeomError, Result, Vec3};

/// `β` projected on the Frenet frame, with `ν = c_n`, `η = c_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameDecomposition {
    pub c_t: f64,
    pub c_n: f64,
    pub c_b: f64,
    pub nu: f64,
    pub eta: f64,
}

pub fn frame_decompose(p: &SurfacePatch, c: &SurfaceCurve, s: f64) -> Result<FrameDecomposition> {
    let f = frenet_at(p, &c.point(s)?)?;
    let (n, b) = f.normal_pair()?;
    let (c_n, c_b) = (f.beta.dot(&n), f.beta.dot(&b));
    Ok(FrameDecomposition {
        c_t: f.beta.dot(&f.t),
        c_n,
        c_b,
        nu: c_n,
        eta: c_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Normal,
    Osculating,
    Rectifying,
    Generic,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveClass {
    pub verdict: Verdict,
    /// Every class whose vanishing condition holds on the grid.
    pub satisfied: Vec<Verdict>,
    pub max_ct: f64,
    pub max_cn: f64,
    pub max_cb: f64,
    pub min_kappa: f64,
    pub grid: Vec<f64>,
}

/// Classify by which frame component of `β` vanishes over the grid:
/// `c_t` (normal), `c_b` (osculating), `c_n` (rectifying), in that priority.
pub fn classify_curve(p: &SurfacePatch, c: &SurfaceCurve, grid: &[f64], tol: f64) -> Result<CurveClass> {
    let mut class = CurveClass {
        verdict: Verdict::Generic,
        satisfied: Vec::new(),
        max_ct: 0.0,
        max_cn: 0.0,
        max_cb: 0.0,
        min_kappa: f64::INFINITY,
        grid: grid.to_vec(),
    };
    let mut degenerate = false;
    for &s in grid {
        let f = frenet_at(p, &c.point(s)?)?;
        class.min_kappa = class.min_kappa.min(f.kappa);
        let Ok((n, b)) = f.normal_pair() else {
            degenerate = true;
            continue;
        };
        class.max_ct = class.max_ct.max(f.beta.dot(&f.t).abs());
        class.max_cn = class.max_cn.max(f.beta.dot(&n).abs());
        class.max_cb = class.max_cb.max(f.beta.dot(&b).abs());
    }
    if degenerate || grid.is_empty() {
        class.verdict = Verdict::Undefined;
        return Ok(class);
    }
    for (max, verdict) in [
        (class.max_ct, Verdict::Normal),
        (class.max_cb, Verdict::Osculating),
        (class.max_cn, Verdict::Rectifying),
    ] {
        if max <= tol {
            class.satisfied.push(verdict);
        }
    }
    class.verdict = class.satisfied.first().copied().unwrap_or(Verdict::Generic);
    Ok(class)
}

/// `u″Ψ_u + v″Ψ_v + u′²Ψ_uu + 2u′v′Ψ_uv + v′²Ψ_vv`
fn accel_expansion(j: &PatchJets, cp: &CurvePoint) -> Vec3 {
    let (up, vp) = (cp.up(), cp.vp());
    j.pu * cp.upp() + j.pv * cp.vpp() + j.puu * (up * up) + j.puv * (2.0 * up * vp) + j.pvv * (vp * vp)
}

/// Binormal-direction expansion `β′ × β″` in patch derivatives.
fn binormal_expansion(j: &PatchJets, cp: &CurvePoint) -> Vec3 {
    let (up, vp, upp, vpp) = (cp.up(), cp.vp(), cp.upp(), cp.vpp());
    j.pu.cross(&j.pv) * (up * vpp - upp * vp)
        + j.pu.cross(&j.puu) * (up * up * up)
        + j.pu.cross(&j.puv) * (2.0 * up * up * vp)
        + j.pu.cross(&j.pvv) * (up * vp * vp)
        + j.pv.cross(&j.puu) * (up * up * vp)
        + j.pv.cross(&j.puv) * (2.0 * up * vp * vp)
        + j.pv.cross(&j.pvv) * (vp * vp * vp)
}

/// `(ν/κ) β″ + (η/κ) β′ × β″` from patch jets, given the two ratios.
fn synth_from_ratios(j: &PatchJets, cp: &CurvePoint, n_ratio: f64, b_ratio: f64) -> Vec3 {
    accel_expansion(j, cp) * n_ratio + binormal_expansion(j, cp) * b_ratio
}

/// `u′²(Ψ_uu·Ñ) + 2u′v′(Ψ_uv·Ñ) + v′²(Ψ_vv·Ñ)` with `Ñ = Ψ_u × Ψ_v`.
fn weighted_normal_curvature(j: &PatchJets, cp: &CurvePoint) -> f64 {
    let n = j.area_normal();
    let (up, vp) = (cp.up(), cp.vp());
    up * up * j.puu.dot(&n) + 2.0 * up * vp * j.puv.dot(&n) + vp * vp * j.pvv.dot(&n)
}

/// Profile values and Frenet ratios of a normal curve at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Ratios {
    kappa: f64,
    n_ratio: f64,
    b_ratio: f64,
}

fn ratios(j: &PatchJets, cp: &CurvePoint, nu: &ScalarField, eta: &ScalarField) -> Result<Ratios> {
    let kappa = accel_expansion(j, cp).norm();
    if !(kappa > CURVATURE_FLOOR) {
        return Err(GeomError::VanishingCurvature { s: cp.s, kappa });
    }
    Ok(Ratios {
        kappa,
        n_ratio: nu.eval(&[cp.s])? / kappa,
        b_ratio: eta.eval(&[cp.s])? / kappa,
    })
}

fn source_point(p: &SurfacePatch, c: &SurfaceCurve, s: f64) -> Result<(CurvePoint, PatchJets, FirstForm)> {
    let cp = c.point(s)?;
    let j = p.regular_jets(cp.u.value, cp.v.value)?;
    let m = FirstForm::from_jets(&j);
    check_unit_speed(&m, &cp)?;
    Ok((cp, j, m))
}

/// Position of the normal curve with profiles `ν(s), η(s)`:
/// `(ν/κ)[u″Ψ_u + … + v′²Ψ_vv] + (η/κ)[(u′v″ − u″v′)Ψ_u×Ψ_v + … + v′³Ψ_v×Ψ_vv]`.
pub fn synth_position(
    p: &SurfacePatch,
    c: &SurfaceCurve,
    nu: &ScalarField,
    eta: &ScalarField,
    s: f64,
) -> Result<Vec3> {
    let (cp, j, _) = source_point(p, c, s)?;
    let r = ratios(&j, &cp, nu, eta)?;
    Ok(synth_from_ratios(&j, &cp, r.n_ratio, r.b_ratio))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalComponent {
    /// `β·(Ψ_u × Ψ_v)`
    pub direct: f64,
    /// `(ν/κ)κ_n^w + (η/κ)W² B`
    pub closed_form: f64,
    pub residual: f64,
}

pub fn normal_component_identity_residual(
    p: &SurfacePatch,
    c: &SurfaceCurve,
    nu: &ScalarField,
    eta: &ScalarField,
    s: f64,
) -> Result<NormalComponent> {
    let (cp, j, m) = source_point(p, c, s)?;
    let r = ratios(&j, &cp, nu, eta)?;
    let direct = synth_from_ratios(&j, &cp, r.n_ratio, r.b_ratio).dot(&j.area_normal());
    let closed_form = r.n_ratio * weighted_normal_curvature(&j, &cp)
        + r.b_ratio * m.w2() * beltrami_bracket(&christoffel(&m), &cp);
    Ok(NormalComponent {
        direct,
        closed_form,
        residual: (direct - closed_form).abs(),
    })
}

/// Power of `ζ` multiplying `h` on the right-hand side of the normal
/// deviation identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    /// `(ν/κ)(κ̃_n − ζ⁴κ_n) + (η/κ) h`
    AsPrinted,
    /// `(ν/κ)(κ̃_n − ζ⁴κ_n) + (η/κ) ζ⁴ h`
    Zeta4OnH,
}

impl Correction {
    pub const ALL: [Correction; 2] = [Correction::AsPrinted, Correction::Zeta4OnH];

    pub fn label(self) -> &'static str {
        match self {
            Correction::AsPrinted => "as_printed",
            Correction::Zeta4OnH => "zeta4_on_h",
        }
    }
}

/// Normal-component deviation `β̃·Ñ̃ − ζ⁴ β·Ñ` against both right-hand sides.
///
/// `β̃` is built on the target from the same `u(s), v(s)` and the source
/// ratios `ν/κ, η/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalDeviation {
    pub s: f64,
    pub zeta: f64,
    pub kappa: f64,
    pub kappa_n_source: f64,
    pub kappa_n_target: f64,
    pub h: f64,
    pub lhs: f64,
    pub rhs_as_printed: f64,
    pub rhs_zeta4_on_h: f64,
    pub residual_as_printed: f64,
    pub residual_zeta4_on_h: f64,
}

impl NormalDeviation {
    pub fn residual(&self, c: Correction) -> f64 {
        match c {
            Correction::AsPrinted => self.residual_as_printed,
            Correction::Zeta4OnH => self.residual_zeta4_on_h,
        }
    }
}

struct PairCurvePoint {
    cp: CurvePoint,
    src: PatchJets,
    tgt: PatchJets,
    m: FirstForm,
    zeta: crate::conformal::ZetaJet,
    r: Ratios,
}

fn pair_curve_point(
    pair: &ConformalPair,
    c: &SurfaceCurve,
    nu: &ScalarField,
    eta: &ScalarField,
    s: f64,
) -> Result<PairCurvePoint> {
    let sp = pair.source.require_patch("normal curve synthesis")?;
    let tp = pair.target.require_patch("normal curve synthesis")?;
    let (cp, src, m) = source_point(sp, c, s)?;
    let (u, v) = (cp.u.value, cp.v.value);
    let tgt = tp.regular_jets(u, v)?;
    let zeta = pair.at(u, v)?.zeta;
    let r = ratios(&src, &cp, nu, eta)?;
    Ok(PairCurvePoint { cp, src, tgt, m, zeta, r })
}

pub fn normal_deviation(
    pair: &ConformalPair,
    c: &SurfaceCurve,
    nu: &ScalarField,
    eta: &ScalarField,
    s: f64,
) -> Result<NormalDeviation> {
    let PairCurvePoint { cp, src, tgt, m, zeta, r } = pair_curve_point(pair, c, nu, eta, s)?;
    let z4 = zeta.value.powi(4);
    let beta = synth_from_ratios(&src, &cp, r.n_ratio, r.b_ratio);
    let beta_t = synth_from_ratios(&tgt, &cp, r.n_ratio, r.b_ratio);
    let lhs = beta_t.dot(&tgt.area_normal()) - z4 * beta.dot(&src.area_normal());
    let kn = weighted_normal_curvature(&src, &cp);
    let kn_t = weighted_normal_curvature(&tgt, &cp);
    let h = h_function(&m, &theta_terms(&m, &zeta), &cp.jets());
    let base = r.n_ratio * (kn_t - z4 * kn);
    let rhs_as_printed = base + r.b_ratio * h;
    let rhs_zeta4_on_h = base + r.b_ratio * z4 * h;
    Ok(NormalDeviation {
        s,
        zeta: zeta.value,
        kappa: r.kappa,
        kappa_n_source: kn,
        kappa_n_target: kn_t,
        h,
        lhs,
        rhs_as_printed,
        rhs_zeta4_on_h,
        residual_as_printed: (lhs - rhs_as_printed).abs(),
        residual_zeta4_on_h: (lhs - rhs_zeta4_on_h).abs(),
    })
}

pub fn theorem3_residual(
    pair: &ConformalPair,
    c: &SurfaceCurve,
    nu: &ScalarField,
    eta: &ScalarField,
    s: f64,
    correction: Correction,
) -> Result<f64> {
    Ok(normal_deviation(pair, c, nu, eta, s)?.residual(correction))
}

/// Tangential deviation along `Ψ̃_u`, `Ψ̃_v` and a combined direction
/// `aΨ_u + bΨ_v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tangential {
    pub s: f64,
    pub g1: f64,
    pub g2: f64,
    pub lhs_u: f64,
    pub rhs_u: f64,
    pub lhs_v: f64,
    pub rhs_v: f64,
    pub lhs_t: f64,
    pub rhs_t: f64,
    pub r_u: f64,
    pub r_v: f64,
    pub r_t: f64,
}

/// `a, b` default to `u′, v′`, the curve tangent.
pub fn tangential_residual(
    pair: &ConformalPair,
    c: &SurfaceCurve,
    nu: &ScalarField,
    eta: &ScalarField,
    s: f64,
    ab: Option<(f64, f64)>,
) -> Result<Tangential> {
    let PairCurvePoint { cp, src, tgt, m, zeta, r } = pair_curve_point(pair, c, nu, eta, s)?;
    let z2 = zeta.value * zeta.value;
    let (up, vp) = (cp.up(), cp.vp());
    let (a, b) = ab.unwrap_or((up, vp));
    let beta = synth_from_ratios(&src, &cp, r.n_ratio, r.b_ratio);
    let beta_t = synth_from_ratios(&tgt, &cp, r.n_ratio, r.b_ratio);
    let (g1, g2) = g_functions(&m, &zeta, &cp.jets(), r.n_ratio);
    let dk = weighted_normal_curvature(&tgt, &cp) - z2 * weighted_normal_curvature(&src, &cp);

    let lhs_u = beta_t.dot(&tgt.pu) - z2 * beta.dot(&src.pu);
    let lhs_v = beta_t.dot(&tgt.pv) - z2 * beta.dot(&src.pv);
    let lhs_t = beta_t.dot(&(tgt.pu * a + tgt.pv * b)) - z2 * beta.dot(&(src.pu * a + src.pv * b));
    let rhs_u = g1 + r.b_ratio * vp * dk;
    let rhs_v = g2 - r.b_ratio * up * dk;
    let rhs_t = a * g1 + b * g2 + r.b_ratio * dk * (a * vp - b * up);
    Ok(Tangential {
        s,
        g1,
        g2,
        lhs_u,
        rhs_u,
        lhs_v,
        rhs_v,
        lhs_t,
        rhs_t,
        r_u: (lhs_u - rhs_u).abs(),
        r_v: (lhs_v - rhs_v).abs(),
        r_t: (lhs_t - rhs_t).abs(),
    })
}

/// First fundamental form at the curve point, for callers that only need
/// the metric along `c`.
pub fn metric_along(p: &SurfacePatch, c: &SurfaceCurve, s: f64) -> Result<FirstForm> {
    let cp = c.point(s)?;
    first_fundamental(p, cp.u.value, cp.v.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn s_field(t: &str) -> ScalarField {
        ScalarField::parse(t, &["s"]).unwrap()
    }

    #[test]
    fn equator_decomposition() {
        let d = frame_decompose(&fixtures::unit_sphere(), &fixtures::equator(), 0.3).unwrap();
        assert_abs_diff_eq!(d.c_t, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.nu, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eta, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn classification_examples() {
        let grid: Vec<f64> = (0..12).map(|i| i as f64 * 0.5).collect();
        let eq = classify_curve(&fixtures::unit_sphere(), &fixtures::equator(), &grid, 1e-8).unwrap();
        assert_eq!(eq.verdict, Verdict::Normal);
        let off = classify_curve(&fixtures::plane(), &fixtures::plane_circle(1.0, 2.0, 0.0), &grid, 1e-8).unwrap();
        assert_eq!(off.verdict, Verdict::Osculating);
        assert!(!off.satisfied.contains(&Verdict::Normal));
        let line = SurfaceCurve::parse("s", "0").unwrap();
        let l = classify_curve(&fixtures::plane(), &line, &grid, 1e-8).unwrap();
        assert_eq!(l.verdict, Verdict::Undefined);
    }

    #[test]
    fn synth_on_equator() {
        let (p, c) = (fixtures::unit_sphere(), fixtures::equator());
        let b = synth_position(&p, &c, &s_field("0"), &s_field("1"), 0.0).unwrap();
        assert_abs_diff_eq!(b, Vec3::new(0.0, 0.0, 1.0), epsilon = 1e-14);
        let n = synth_position(&p, &c, &s_field("1"), &s_field("0"), 0.0).unwrap();
        assert_abs_diff_eq!(n, Vec3::new(-1.0, 0.0, 0.0), epsilon = 1e-14);
    }

    #[test]
    fn normal_component_on_latitude() {
        let (p, c) = (fixtures::unit_sphere(), fixtures::latitude(FRAC_PI_4));
        for s in [0.0, 0.7, 2.1] {
            let r = normal_component_identity_residual(&p, &c, &s_field("cos(s)"), &s_field("1 + s^2"), s).unwrap();
            assert!(r.residual < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn homothety_deviation_is_pure_normal_curvature() {
        let pair = fixtures::sphere_homothety_pair(3.0);
        let c = fixtures::latitude(FRAC_PI_4);
        let d = normal_deviation(&pair, &c, &s_field("0.5"), &s_field("2"), 0.4).unwrap();
        assert_eq!(d.h, 0.0);
        assert!(d.residual_as_printed < 1e-10);
        assert!(d.residual_zeta4_on_h < 1e-10);
    }

    #[test]
    fn tangential_homothety_with_zero_nu() {
        let pair = fixtures::sphere_homothety_pair(3.0);
        let c = fixtures::latitude(FRAC_PI_4);
        let t = tangential_residual(&pair, &c, &s_field("0"), &s_field("1"), 0.9, None).unwrap();
        assert!(t.lhs_t.abs() < 1e-12 && t.rhs_t.abs() < 1e-12, "{t:?}");
        assert!(t.r_u < 1e-12 && t.r_v < 1e-12);
        let _ = FRAC_PI_2;
    }
}
