//! Deviation of intrinsic and extrinsic quantities across a conformal pair.
//!
//! A pair shares one parameter domain: source `Ψ` (or metric `E, F, G`) and
//! target `Ψ̃` with `Ẽ = ζ²E, F̃ = ζ²F, G̃ = ζ²G`. The dilation `ζ` is always
//! estimated from the metric ratio; a declared `ζ` expression is cross-checked
//! against the estimate and then supplies the exact partials.

use serde::Serialize;

use crate::exprkit::{Grad3, ScalarField};
use crate::geometry::{
    beltrami_bracket, check_unit_speed, christoffel, connection_cubic, ChristoffelSet, CurveJets,
    CurvePoint, FirstForm, MetricSource, Surface, SurfaceCurve, Weight,
};
use crate::{GeomError, Mat3, Result, Vec3};

/// Default tolerance on the normalized metric-ratio residuals.
pub const CONFORMALITY_TOL: f64 = 1e-8;
/// Tolerance for `target = map ∘ source` at load time.
pub const AMBIENT_MATCH_TOL: f64 = 1e-9;

/// Smooth map of ambient space, three expressions over `x, y, z`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientMap {
    comps: [ScalarField; 3],
}

impl AmbientMap {
    pub fn parse(comps: [&str; 3]) -> Result<Self> {
        let f = |t: &str| ScalarField::parse(t, &["x", "y", "z"]);
        Ok(AmbientMap {
            comps: [f(comps[0])?, f(comps[1])?, f(comps[2])?],
        })
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.comps
    }

    pub fn apply(&self, p: &Vec3) -> Result<Vec3> {
        let a = [p.x, p.y, p.z];
        Ok(Vec3::new(
            self.comps[0].eval(&a)?,
            self.comps[1].eval(&a)?,
            self.comps[2].eval(&a)?,
        ))
    }
}

/// Jacobian of an ambient map at `p`, rows indexed by output component.
pub fn ambient_jacobian(map: &AmbientMap, p: &Vec3) -> Result<Mat3> {
    let args = [Grad3::var(0, p.x), Grad3::var(1, p.y), Grad3::var(2, p.z)];
    let mut j = Mat3::zeros();
    for (row, comp) in map.comps.iter().enumerate() {
        let g = comp.eval_with(&args)?;
        for col in 0..3 {
            j[(row, col)] = g.grad[col];
        }
    }
    Ok(j)
}

/// Two surfaces over one parameter domain, related by a dilation field.
#[derive(Debug, Clone)]
pub struct ConformalPair {
    pub source: Surface,
    pub target: Surface,
    pub dilation: Option<ScalarField>,
    pub ambient_map: Option<AmbientMap>,
    pub tol: f64,
}

impl ConformalPair {
    pub fn new(source: Surface, target: Surface) -> Self {
        ConformalPair {
            source,
            target,
            dilation: None,
            ambient_map: None,
            tol: CONFORMALITY_TOL,
        }
    }

    pub fn with_dilation(mut self, zeta: ScalarField) -> Self {
        self.dilation = Some(zeta);
        self
    }

    pub fn with_ambient_map(mut self, map: AmbientMap) -> Self {
        self.ambient_map = Some(map);
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Load-time checks: shared domain, positive declared dilation, and
    /// `target = map ∘ source` at the given sample points.
    pub fn validate(&self, samples: &[(f64, f64)]) -> Result<()> {
        if self.source.domain() != self.target.domain() {
            return Err(GeomError::Invalid(format!(
                "pair members have different domains {:?} vs {:?}",
                self.source.domain(),
                self.target.domain()
            )));
        }
        if !(self.tol > 0.0) {
            return Err(GeomError::Invalid(format!("tolerance must be positive, got {}", self.tol)));
        }
        for &(u, v) in samples {
            if let Some(z) = &self.dilation {
                let zeta = z.eval(&[u, v])?;
                if !(zeta > 0.0) {
                    return Err(GeomError::NonPositiveDilation { u, v, zeta });
                }
            }
            if let Some(map) = &self.ambient_map {
                let src = self.source.require_patch("ambient map check")?;
                let tgt = self.target.require_patch("ambient map check")?;
                let mapped = map.apply(&src.position(u, v)?)?;
                let distance = (mapped - tgt.position(u, v)?).norm();
                if !(distance <= AMBIENT_MATCH_TOL) {
                    return Err(GeomError::AmbientMismatch { u, v, distance });
                }
            }
        }
        Ok(())
    }

    /// Both first forms and the dilation jet at a point, conformality checked.
    pub fn at(&self, u: f64, v: f64) -> Result<PairPoint> {
        let source = self.source.first_form(u, v)?;
        let target = self.target.first_form(u, v)?;
        let estimate = estimate_dilation(&source, &target, u, v, self.tol)?;
        let zeta = match &self.dilation {
            Some(z) => {
                let j = z.eval_jet2(u, v)?;
                if !(j.value > 0.0) {
                    return Err(GeomError::NonPositiveDilation { u, v, zeta: j.value });
                }
                if (j.value - estimate.zeta).abs() > self.tol * estimate.zeta.max(1.0) {
                    return Err(GeomError::DilationMismatch {
                        u,
                        v,
                        declared: j.value,
                        estimated: estimate.zeta,
                    });
                }
                ZetaJet {
                    value: j.value,
                    du: j.du,
                    dv: j.dv,
                }
            }
            None => estimate.jet(&source, &target),
        };
        Ok(PairPoint {
            u,
            v,
            source,
            target,
            estimate,
            zeta,
        })
    }
}

/// `ζ` and its first partials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaJet {
    pub value: f64,
    pub du: f64,
    pub dv: f64,
}

impl ZetaJet {
    pub fn constant(c: f64) -> Self {
        ZetaJet {
            value: c,
            du: 0.0,
            dv: 0.0,
        }
    }
}

impl From<crate::exprkit::Jet2> for ZetaJet {
    fn from(j: crate::exprkit::Jet2) -> Self {
        ZetaJet {
            value: j.value,
            du: j.du,
            dv: j.dv,
        }
    }
}

/// Metric-ratio estimate of `ζ` with the three normalized residuals
/// `|ζ²E − Ẽ|, |ζ²F − F̃|, |ζ²G − G̃|` (each over `max(1, |Ẽ|)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationEstimate {
    pub zeta: f64,
    pub residuals: [f64; 3],
}

impl DilationEstimate {
    /// Partials from `ζ² = Ẽ/E`: `ζ_u = (Ẽ_u − ζ²E_u) / (2ζE)`.
    pub fn jet(&self, source: &FirstForm, target: &FirstForm) -> ZetaJet {
        let z = self.zeta;
        let d = 2.0 * z * source.e;
        ZetaJet {
            value: z,
            du: (target.e_u - z * z * source.e_u) / d,
            dv: (target.e_v - z * z * source.e_v) / d,
        }
    }
}

fn estimate_dilation(
    source: &FirstForm,
    target: &FirstForm,
    u: f64,
    v: f64,
    tol: f64,
) -> Result<DilationEstimate> {
    if !(source.e > crate::geometry::METRIC_DET_FLOOR) {
        return Err(GeomError::MetricNotPositive {
            u,
            v,
            e: source.e,
            g: source.g,
            det: source.w2(),
        });
    }
    let z2 = target.e / source.e;
    let scale = target.e.abs().max(1.0);
    let residuals = [
        (z2 * source.e - target.e).abs() / scale,
        (z2 * source.f - target.f).abs() / scale,
        (z2 * source.g - target.g).abs() / scale,
    ];
    if residuals.iter().any(|r| !(*r <= tol)) {
        return Err(GeomError::NonConformal { u, v, residuals, tol });
    }
    Ok(DilationEstimate {
        zeta: z2.sqrt(),
        residuals,
    })
}

/// First forms of both members, dilation estimate and the `ζ` jet in use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPoint {
    pub u: f64,
    pub v: f64,
    pub source: FirstForm,
    pub target: FirstForm,
    pub estimate: DilationEstimate,
    pub zeta: ZetaJet,
}

pub fn dilation_field(pair: &ConformalPair, u: f64, v: f64) -> Result<DilationEstimate> {
    Ok(pair.at(u, v)?.estimate)
}

/// `ζ` estimated separately from `Ẽ/E`, `G̃/G` and (when `|F|` is not tiny) `F̃/F`.
pub fn dilation_components(source: &FirstForm, target: &FirstForm) -> (f64, Option<f64>, f64) {
    let from_f = (source.f.abs() > 1e-8 * source.e.max(source.g))
        .then(|| (target.f / source.f).max(0.0).sqrt());
    (
        (target.e / source.e).sqrt(),
        from_f,
        (target.g / source.g).sqrt(),
    )
}

/// Additive shift `Γ̃ = Γ + θ` of the Christoffel symbols, same slot layout
/// as [`ChristoffelSet`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ThetaSet {
    pub t111: f64,
    pub t112: f64,
    pub t121: f64,
    pub t122: f64,
    pub t221: f64,
    pub t222: f64,
}

impl ThetaSet {
    pub fn to_array(self) -> [f64; 6] {
        [self.t111, self.t112, self.t121, self.t122, self.t221, self.t222]
    }

    pub fn is_zero(&self) -> bool {
        self.to_array().iter().all(|t| *t == 0.0)
    }
}

/// The six `θ^k_ij` from the source metric and the dilation jet.
pub fn theta_terms(m: &FirstForm, z: &ZetaJet) -> ThetaSet {
    let FirstForm { e, f, g, .. } = *m;
    let (zu, zv) = (z.du, z.dv);
    let d = z.value * m.w2();
    ThetaSet {
        t111: (e * g * zu - 2.0 * f * f * zu + f * e * zv) / d,
        t112: (e * f * zu - e * e * zv) / d,
        t121: (e * g * zv - f * g * zu) / d,
        t122: (e * g * zu - f * e * zv) / d,
        t221: (g * f * zv - g * g * zu) / d,
        t222: (e * g * zv - 2.0 * f * f * zv + f * g * zu) / d,
    }
}

/// Christoffel symbols of both members and the shift residuals
/// `|Γ̃ − Γ − θ|` slot by slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChristoffelShift {
    pub source: ChristoffelSet,
    pub target: ChristoffelSet,
    pub theta: ThetaSet,
    pub residuals: [f64; 6],
}

impl ChristoffelShift {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn christoffel_shift_at(pp: &PairPoint) -> ChristoffelShift {
    let source = christoffel(&pp.source);
    let target = christoffel(&pp.target);
    let theta = theta_terms(&pp.source, &pp.zeta);
    let (g, gt, th) = (source.to_array(), target.to_array(), theta.to_array());
    ChristoffelShift {
        source,
        target,
        theta,
        residuals: std::array::from_fn(|i| (gt[i] - g[i] - th[i]).abs()),
    }
}

pub fn christoffel_shift_residual(pair: &ConformalPair, u: f64, v: f64) -> Result<[f64; 6]> {
    Ok(christoffel_shift_at(&pair.at(u, v)?).residuals)
}

/// Beltrami brackets of the curve on both members and the `θ` cubic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketShift {
    pub b_src: f64,
    pub b_tgt: f64,
    pub theta_bracket: f64,
    /// `|B_tgt − B_src − Θ|`
    pub residual: f64,
}

fn bracket_shift_at(shift: &ChristoffelShift, cp: &CurvePoint) -> BracketShift {
    let b_src = beltrami_bracket(&shift.source, cp);
    let b_tgt = beltrami_bracket(&shift.target, cp);
    let theta_bracket = connection_cubic(&shift.theta.to_array(), cp.up(), cp.vp());
    BracketShift {
        b_src,
        b_tgt,
        theta_bracket,
        residual: (b_tgt - b_src - theta_bracket).abs(),
    }
}

fn curve_pair_point(pair: &ConformalPair, c: &SurfaceCurve, s: f64) -> Result<(CurvePoint, PairPoint)> {
    let cp = c.point(s)?;
    let pp = pair.at(cp.u.value, cp.v.value)?;
    check_unit_speed(&pp.source, &cp)?;
    Ok((cp, pp))
}

pub fn beltrami_bracket_shift(pair: &ConformalPair, c: &SurfaceCurve, s: f64) -> Result<BracketShift> {
    let (cp, pp) = curve_pair_point(pair, c, s)?;
    Ok(bracket_shift_at(&christoffel_shift_at(&pp), &cp))
}

/// `[u′³θ²₁₁ − v′³θ¹₂₂ + 2u′²v′θ²₁₂ + u′v′²θ²₂₂ − u′²v′θ¹₁₁ − 2u′v′²θ¹₁₂] W²`.
///
/// The `θ¹₁₂` term carries the sign that makes this the `θ` part of the
/// Beltrami bracket; the remaining terms are as in the bracket.
pub fn h_function(m: &FirstForm, th: &ThetaSet, jets: &CurveJets) -> f64 {
    connection_cubic(&th.to_array(), jets.up, jets.vp) * m.w2()
}

/// `f = {θ²₁₁u′³ + (2θ²₁₂ − θ¹₁₁)u′²v′ + (θ²₂₂ − 2θ¹₁₂)u′v′² − θ¹₂₂v′³} W²`.
pub fn f_function(m: &FirstForm, th: &ThetaSet, jets: &CurveJets) -> f64 {
    connection_cubic(&th.to_array(), jets.up, jets.vp) * m.w2()
}

/// Tangential deviation terms `(g1, g2)`.
pub fn g_functions(m: &FirstForm, z: &ZetaJet, jets: &CurveJets, nu_over_kappa: f64) -> (f64, f64) {
    let FirstForm { e, f, g, .. } = *m;
    let (zz_u, zz_v) = (z.value * z.du, z.value * z.dv);
    let (up, vp) = (jets.up, jets.vp);
    let g1 = nu_over_kappa
        * (up * up * zz_u * e + 2.0 * up * vp * zz_v * e + vp * vp * (2.0 * zz_v * f - zz_u * g));
    let g2 = nu_over_kappa
        * (up * up * (2.0 * zz_u * f - zz_v * e) + 2.0 * up * vp * zz_u * g + vp * vp * zz_v * g);
    (g1, g2)
}

/// One target/source weight pairing of the geodesic-curvature deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pairing {
    pub target: Weight,
    pub source: Weight,
    pub kappa_g_target: f64,
    pub kappa_g_source: f64,
    /// `|κ̃_g − ζ²κ_g − f|`
    pub residual: f64,
    pub within_tol: bool,
}

/// Point-wise deviation summary along a curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub s: f64,
    pub u: f64,
    pub v: f64,
    pub zeta: f64,
    pub zeta_u: f64,
    pub zeta_v: f64,
    pub conformality: [f64; 3],
    pub christoffel_shift: [f64; 6],
    pub bracket: BracketShift,
    pub f: f64,
    /// `κ_g` of the source curve under `[W1, W2]`.
    pub kappa_g_source: [f64; 2],
    /// `κ_g` of the image curve under `[W1, W2]`, same `s`-derivatives.
    pub kappa_g_target: [f64; 2],
    pub pairings: Vec<Pairing>,
}

impl DeviationReport {
    pub fn pairing(&self, target: Weight, source: Weight) -> &Pairing {
        self.pairings
            .iter()
            .find(|p| p.target == target && p.source == source)
            .expect("all four pairings present")
    }
}

pub fn geodesic_deviation_report(
    pair: &ConformalPair,
    c: &SurfaceCurve,
    s: f64,
) -> Result<DeviationReport> {
    let (cp, pp) = curve_pair_point(pair, c, s)?;
    let shift = christoffel_shift_at(&pp);
    let bracket = bracket_shift_at(&shift, &cp);
    let f = f_function(&pp.source, &shift.theta, &cp.jets());
    let src = Weight::ALL.map(|w| bracket.b_src * w.apply(pp.source.w));
    let tgt = Weight::ALL.map(|w| bracket.b_tgt * w.apply(pp.target.w));
    let z2 = pp.zeta.value * pp.zeta.value;
    let mut pairings = Vec::with_capacity(4);
    for (ti, tw) in Weight::ALL.into_iter().enumerate() {
        for (si, sw) in Weight::ALL.into_iter().enumerate() {
            let residual = (tgt[ti] - z2 * src[si] - f).abs();
            pairings.push(Pairing {
                target: tw,
                source: sw,
                kappa_g_target: tgt[ti],
                kappa_g_source: src[si],
                residual,
                within_tol: residual <= pair.tol,
            });
        }
    }
    Ok(DeviationReport {
        s,
        u: pp.u,
        v: pp.v,
        zeta: pp.zeta.value,
        zeta_u: pp.zeta.du,
        zeta_v: pp.zeta.dv,
        conformality: pp.estimate.residuals,
        christoffel_shift: shift.residuals,
        bracket,
        f,
        kappa_g_source: src,
        kappa_g_target: tgt,
        pairings,
    })
}

/// Tangent pushforward check `Ψ̃_u = ζ J_* Ψ_u`, `Ψ̃_v = ζ J_* Ψ_v`.
///
/// `J_*` is the ambient Jacobian divided by its own conformal scale
/// `|det J|^{1/3}`, so `ζ` from the metric ratio is tested against the
/// scale the ambient map actually applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pushforward {
    pub r_u: f64,
    pub r_v: f64,
    pub zeta: f64,
    pub ambient_scale: f64,
}

pub fn pushforward_residual(pair: &ConformalPair, u: f64, v: f64) -> Result<Pushforward> {
    let map = pair.ambient_map.as_ref().ok_or(GeomError::MissingAmbientMap)?;
    let src = pair.source.require_patch("pushforward")?;
    let tgt = pair.target.require_patch("pushforward")?;
    let pp = pair.at(u, v)?;
    let sj = src.regular_jets(u, v)?;
    let tj = tgt.regular_jets(u, v)?;
    let jac = ambient_jacobian(map, &sj.p)?;
    let scale = jac.determinant().abs().cbrt();
    if !(scale > 0.0) {
        return Err(GeomError::Invalid(format!("ambient map is singular at ({u}, {v})")));
    }
    let rot = jac / scale;
    let z = pp.zeta.value;
    Ok(Pushforward {
        r_u: (tj.pu - z * (rot * sj.pu)).norm(),
        r_v: (tj.pv - z * (rot * sj.pv)).norm(),
        zeta: z,
        ambient_scale: scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_and_homothety_dilation() {
        let d = dilation_field(&fixtures::identity_plane_pair(), 0.2, 0.3).unwrap();
        assert_eq!(d.zeta, 1.0);
        assert_eq!(d.residuals, [0.0; 3]);
        let d = dilation_field(&fixtures::plane_homothety_pair(), -0.5, 0.9).unwrap();
        assert_eq!(d.zeta, 3.0);
        assert_eq!(d.residuals, [0.0; 3]);
    }

    #[test]
    fn stereographic_dilation() {
        let pair = fixtures::stereographic_pair();
        let d = dilation_field(&pair, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(d.zeta, 2.0, epsilon = 1e-14);
        assert!(d.residuals.iter().all(|r| *r < 1e-10));
        let d = dilation_field(&pair, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(d.zeta, 2.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn anisotropic_stretch_is_not_conformal() {
        let stretch = crate::geometry::SurfacePatch::parse("u", "2*v", "0", fixtures::unit_box()).unwrap();
        let pair = ConformalPair::new(fixtures::plane().into(), stretch.into());
        match pair.at(0.1, 0.1) {
            Err(GeomError::NonConformal { residuals, .. }) => {
                assert_eq!(residuals[0], 0.0);
                assert_abs_diff_eq!(residuals[2], 3.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn declared_dilation_is_cross_checked() {
        let pair = ConformalPair::new(fixtures::plane().into(), fixtures::plane_scaled3().into())
            .with_dilation(ScalarField::parse("2", &["u", "v"]).unwrap());
        assert!(matches!(pair.at(0.0, 0.0), Err(GeomError::DilationMismatch { .. })));
        let pair = ConformalPair::new(fixtures::plane().into(), fixtures::plane().into())
            .with_dilation(ScalarField::parse("u", &["u", "v"]).unwrap());
        assert!(matches!(
            pair.validate(&[(-0.5, 0.0)]),
            Err(GeomError::NonPositiveDilation { .. })
        ));
    }

    #[test]
    fn ambient_map_must_carry_source_to_target() {
        let pair = ConformalPair::new(fixtures::plane().into(), fixtures::plane_scaled3().into())
            .with_ambient_map(fixtures::identity_map());
        assert!(matches!(
            pair.validate(&[(0.5, 0.5)]),
            Err(GeomError::AmbientMismatch { .. })
        ));
        assert!(fixtures::plane_homothety_pair().validate(&[(0.5, 0.5)]).is_ok());
    }

    #[test]
    fn theta_examples() {
        let flat = fixtures::flat_metric().first_form(0.0, 0.0).unwrap();
        let th = theta_terms(&flat, &ZetaJet::constant(1.0));
        assert!(th.is_zero());
        let th = theta_terms(&flat, &ZetaJet::constant(4.0));
        assert!(th.is_zero());
        let th = theta_terms(&flat, &ZetaJet { value: 1.0, du: 1.0, dv: 0.0 });
        assert_eq!(th.to_array(), [1.0, 0.0, 0.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn h_and_g_examples() {
        let flat = fixtures::flat_metric().first_form(0.0, 0.0).unwrap();
        let z = ZetaJet { value: 1.0, du: 1.0, dv: 0.0 };
        let th = theta_terms(&flat, &z);
        let jets = |up, vp| CurveJets { up, vp, ..Default::default() };
        assert_eq!(h_function(&flat, &th, &jets(0.0, 1.0)), 1.0);
        assert_eq!(h_function(&flat, &th, &jets(1.0, 0.0)), 0.0);
        assert_eq!(h_function(&flat, &ThetaSet::default(), &jets(0.6, 0.8)), 0.0);
        assert_eq!(g_functions(&flat, &z, &jets(1.0, 0.0), 1.0), (1.0, 0.0));
        assert_eq!(g_functions(&flat, &z, &jets(0.6, 0.8), 0.0), (0.0, 0.0));
        assert_eq!(g_functions(&flat, &ZetaJet::constant(3.0), &jets(0.6, 0.8), 2.0), (0.0, 0.0));
    }

    #[test]
    fn shift_on_exponential_metric() {
        let pair = fixtures::exp_metric_pair();
        let sh = christoffel_shift_at(&pair.at(0.0, 0.0).unwrap());
        assert_eq!(sh.target.g111, 1.0);
        assert_eq!(sh.source.g111 + sh.theta.t111, 1.0);
        assert!(sh.max_residual() < 1e-14);
        let c = SurfaceCurve::parse("s", "0").unwrap();
        let b = beltrami_bracket_shift(&pair, &c, 0.0).unwrap();
        assert_eq!(b.b_tgt - b.b_src, 0.0);
        assert_eq!(b.theta_bracket, 0.0);
        assert_eq!(b.residual, 0.0);
    }

    #[test]
    fn ambient_jacobian_examples() {
        let p = Vec3::new(0.3, -0.2, 1.7);
        assert_eq!(ambient_jacobian(&fixtures::identity_map(), &p).unwrap(), Mat3::identity());
        assert_eq!(ambient_jacobian(&fixtures::scaling_map(3.0), &p).unwrap(), Mat3::identity() * 3.0);
        let j = ambient_jacobian(&fixtures::inversion_map(), &Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(j, Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0)), epsilon = 1e-15);
    }

    #[test]
    fn pushforward_examples() {
        let r = pushforward_residual(&fixtures::identity_plane_pair(), 0.3, 0.1).unwrap();
        assert_eq!((r.r_u, r.r_v), (0.0, 0.0));
        let r = pushforward_residual(&fixtures::plane_homothety_pair(), 0.3, 0.1).unwrap();
        assert_eq!(r.zeta, 3.0);
        assert_abs_diff_eq!(r.r_u, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.r_v, 0.0, epsilon = 1e-14);
        assert!(matches!(
            pushforward_residual(&fixtures::stereographic_pair(), 0.0, 0.0),
            Err(GeomError::MissingAmbientMap)
        ));
    }
}
