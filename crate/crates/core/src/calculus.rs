//! Finite-difference oracle and arc-length reparameterization.
//!
//! The difference stencils here never touch the jet machinery beyond plain
//! value evaluation, so they stay usable as an independent check on it.

use crate::exprkit::{Jet3, ScalarField};
use crate::geometry::{CurvePoint, SurfacePatch};
use crate::{GeomError, Result, Vec3};

/// Default step for first partials.
pub const FIRST_STEP: f64 = 1e-5;
/// Default step for second partials.
pub const SECOND_STEP: f64 = 1e-4;
/// Absolute quadrature tolerance per panel.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Integrand floor below which the curve is treated as stalled.
pub const ZERO_SPEED: f64 = 1e-12;

/// Central-difference partial of `f` at `point`. `index` lists the variables
/// to differentiate by (empty for the value, at most two entries).
pub fn fd_partial_fn<F>(f: F, point: &[f64], index: &[usize], step: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if !(step > 0.0) {
        return Err(GeomError::Invalid(format!("step must be positive, got {step}")));
    }
    if let Some(&i) = index.iter().find(|&&i| i >= point.len()) {
        return Err(GeomError::Invalid(format!("variable index {i} out of range")));
    }
    let at = |shifts: &[(usize, f64)]| {
        let mut p = point.to_vec();
        for &(i, d) in shifts {
            p[i] += d;
        }
        f(&p)
    };
    let h = step;
    match *index {
        [] => f(point),
        [i] => Ok((at(&[(i, h)])? - at(&[(i, -h)])?) / (2.0 * h)),
        [i, j] if i == j => {
            Ok((at(&[(i, h)])? - 2.0 * f(point)? + at(&[(i, -h)])?) / (h * h))
        }
        [i, j] => Ok((at(&[(i, h), (j, h)])? - at(&[(i, h), (j, -h)])?
            - at(&[(i, -h), (j, h)])?
            + at(&[(i, -h), (j, -h)])?)
            / (4.0 * h * h)),
        _ => Err(GeomError::Invalid(format!(
            "derivative order {} exceeds 2",
            index.len()
        ))),
    }
}

pub fn fd_partial(e: &ScalarField, point: &[f64], index: &[usize], step: f64) -> Result<f64> {
    fd_partial_fn(|p| Ok(e.eval(p)?), point, index, step)
}

/// Central-difference derivative of a vector-valued function of one variable.
pub fn fd_vec<F>(f: F, x: f64, order: usize, step: f64) -> Result<Vec3>
where
    F: Fn(f64) -> Result<Vec3>,
{
    let h = step;
    match order {
        1 => Ok((f(x + h)? - f(x - h)?) / (2.0 * h)),
        2 => Ok((f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h)),
        _ => Err(GeomError::Invalid(format!("fd_vec order {order}"))),
    }
}

fn simpson<F: Fn(f64) -> Result<f64>>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (fa, fm, fb) = (f(a)?, f(0.5 * (a + b))?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// One row of the arc-length table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSample {
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    /// `dt/ds = 1/|dβ/dt|`
    pub dt_ds: f64,
}

/// A curve given in a raw parameter `t`, resampled by arc length.
///
/// `t(s)` is a piecewise cubic Hermite interpolant through the table using
/// the exact slopes `dt/ds`. Jets in `s` are then formed from the exact
/// `t`-jets of the curve, so speed is 1 to roundoff wherever `t(s)` lands.
#[derive(Debug, Clone)]
pub struct UnitSpeedCurve {
    patch: SurfacePatch,
    u: ScalarField,
    v: ScalarField,
    samples: Vec<ArcSample>,
}

struct RawJets {
    u: Jet3,
    v: Jet3,
    /// `|dβ/dt|` and its `t`-derivative
    speed: f64,
    dspeed: f64,
}

fn raw_jets(patch: &SurfacePatch, u: &ScalarField, v: &ScalarField, t: f64) -> Result<RawJets> {
    let (uj, vj) = (u.eval_jet3(t)?, v.eval_jet3(t)?);
    let [x, y, z] = patch.compose(uj, vj)?;
    let d1 = Vec3::new(x.d1, y.d1, z.d1);
    let d2 = Vec3::new(x.d2, y.d2, z.d2);
    let speed = d1.norm();
    Ok(RawJets {
        u: uj,
        v: vj,
        speed,
        dspeed: if speed > 0.0 { d1.dot(&d2) / speed } else { 0.0 },
    })
}

impl UnitSpeedCurve {
    pub fn samples(&self) -> &[ArcSample] {
        &self.samples
    }

    pub fn length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.s)
    }

    pub fn patch(&self) -> &SurfacePatch {
        &self.patch
    }

    /// Raw parameter at arc length `s`.
    pub fn t_at(&self, s: f64) -> Result<f64> {
        let len = self.length();
        let slack = 1e-12 * len.max(1.0);
        if !(s >= -slack && s <= len + slack) {
            return Err(GeomError::Invalid(format!("s = {s} outside [0, {len}]")));
        }
        let s = s.clamp(0.0, len);
        let k = match self.samples.partition_point(|a| a.s <= s) {
            0 => 0,
            i => (i - 1).min(self.samples.len() - 2),
        };
        let (a, b) = (&self.samples[k], &self.samples[k + 1]);
        let h = b.s - a.s;
        let x = (s - a.s) / h;
        let (x2, x3) = (x * x, x * x * x);
        let h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
        let h10 = x3 - 2.0 * x2 + x;
        let h01 = -2.0 * x3 + 3.0 * x2;
        let h11 = x3 - x2;
        Ok(h00 * a.t + h10 * h * a.dt_ds + h01 * b.t + h11 * h * b.dt_ds)
    }

    /// Jets of `(u, v)` in `s` to second order.
    pub fn point(&self, s: f64) -> Result<CurvePoint> {
        let t = self.t_at(s)?;
        let r = raw_jets(&self.patch, &self.u, &self.v, t)?;
        if r.speed < ZERO_SPEED {
            return Err(GeomError::ZeroSpeed { t });
        }
        let ts = 1.0 / r.speed;
        let tss = -r.dspeed / (r.speed * r.speed * r.speed);
        let in_s = |j: Jet3| Jet3 {
            value: j.value,
            d1: j.d1 * ts,
            d2: j.d2 * ts * ts + j.d1 * tss,
            d3: 0.0,
        };
        Ok(CurvePoint {
            s,
            u: in_s(r.u),
            v: in_s(r.v),
            third_order: false,
        })
    }
}

/// Resample `(u(t), v(t))` on `patch` by arc length over `n + 1` samples.
pub fn reparameterize_arclength(
    patch: &SurfacePatch,
    u: &ScalarField,
    v: &ScalarField,
    t0: f64,
    t1: f64,
    n: usize,
) -> Result<UnitSpeedCurve> {
    if !(t1 > t0) {
        return Err(GeomError::Invalid(format!("empty parameter range [{t0}, {t1}]")));
    }
    if n < 16 {
        return Err(GeomError::Invalid(format!("need at least 16 panels, got {n}")));
    }
    let speed = |t: f64| -> Result<f64> {
        let r = raw_jets(patch, u, v, t)?;
        if r.speed < ZERO_SPEED {
            return Err(GeomError::ZeroSpeed { t });
        }
        Ok(r.speed)
    };
    let mut samples = Vec::with_capacity(n + 1);
    let mut s = 0.0;
    for i in 0..=n {
        let t = t0 + (t1 - t0) * i as f64 / n as f64;
        if i > 0 {
            let prev = samples.last().map_or(t0, |a: &ArcSample| a.t);
            let ds = adaptive_simpson(speed, prev, t, QUADRATURE_TOL)?;
            if !(ds > 0.0) {
                return Err(GeomError::NonMonotoneLength { index: i });
            }
            s += ds;
        }
        let (uu, vv) = (u.eval(&[t])?, v.eval(&[t])?);
        samples.push(ArcSample {
            s,
            t,
            u: uu,
            v: vv,
            dt_ds: 1.0 / speed(t)?,
        });
    }
    Ok(UnitSpeedCurve {
        patch: patch.clone(),
        u: u.clone(),
        v: v.clone(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{curve_speed, first_fundamental};
    use approx::assert_abs_diff_eq;

    fn field(t: &str, vars: &[&str]) -> ScalarField {
        ScalarField::parse(t, vars).unwrap()
    }

    #[test]
    fn fd_examples() {
        let e = field("u^2*v", &["u", "v"]);
        assert_abs_diff_eq!(fd_partial(&e, &[2.0, 3.0], &[0], 1e-5).unwrap(), 12.0, epsilon = 1e-6);
        assert_abs_diff_eq!(fd_partial(&e, &[2.0, 3.0], &[0, 1], 1e-4).unwrap(), 4.0, epsilon = 1e-5);
        let e = field("sin(u)", &["u", "v"]);
        assert_abs_diff_eq!(fd_partial(&e, &[0.0, 0.5], &[0, 0], 1e-4).unwrap(), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn fd_rejects_bad_requests() {
        let e = field("log(u)", &["u"]);
        assert!(fd_partial(&e, &[0.5], &[0], 0.0).is_err());
        assert!(fd_partial(&e, &[0.5], &[0, 0, 0], 1e-3).is_err());
        assert!(fd_partial(&e, &[0.5], &[1], 1e-3).is_err());
        // stencil leaves the domain of log
        assert!(matches!(
            fd_partial(&e, &[1e-6], &[0], 1e-5),
            Err(GeomError::Eval(_))
        ));
    }

    fn plane_curve(u: &str, v: &str, t0: f64, t1: f64, n: usize) -> Result<UnitSpeedCurve> {
        reparameterize_arclength(&fixtures::plane(), &field(u, &["t"]), &field(v, &["t"]), t0, t1, n)
    }

    #[test]
    fn unit_speed_input_is_unchanged() {
        let c = plane_curve("t", "0", 0.0, 1.0, 16).unwrap();
        assert_abs_diff_eq!(c.length(), 1.0, epsilon = 1e-12);
        for a in c.samples() {
            assert_abs_diff_eq!(a.s, a.t, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_speed_two() {
        let c = plane_curve("2*t", "0", 0.0, 1.0, 16).unwrap();
        assert_abs_diff_eq!(c.length(), 2.0, epsilon = 1e-12);
        for s in [0.0, 0.3, 1.1, 2.0] {
            assert_abs_diff_eq!(c.t_at(s).unwrap(), s / 2.0, epsilon = 1e-12);
            let p = c.point(s).unwrap();
            assert_abs_diff_eq!(p.up(), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn quadratic_parameter_matches_antiderivative() {
        // length of t ↦ (t², 0) on [1, 2] is t² |₁² = 3
        let c = plane_curve("t^2", "0", 1.0, 2.0, 16).unwrap();
        assert_abs_diff_eq!(c.length(), 3.0, epsilon = 1e-10);
        let plane = fixtures::plane();
        for a in &c.samples()[1..11] {
            assert_abs_diff_eq!(a.s, a.t * a.t - 1.0, epsilon = 1e-10);
            let p = c.point(a.s).unwrap();
            let m = first_fundamental(&plane, p.u.value, p.v.value).unwrap();
            assert_abs_diff_eq!(curve_speed(&m, &p), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn stalled_curve_is_refused() {
        assert!(matches!(
            plane_curve("t^2", "0", -1.0, 1.0, 16),
            Err(GeomError::ZeroSpeed { .. })
        ));
        assert!(plane_curve("t", "0", 1.0, 0.0, 16).is_err());
        assert!(plane_curve("t", "0", 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn out_of_range_arc_position() {
        let c = plane_curve("t", "0", 0.0, 1.0, 16).unwrap();
        assert!(c.point(1.5).is_err());
        assert!(c.point(-0.1).is_err());
    }

    #[test]
    fn quadrature_of_smooth_function() {
        let i = adaptive_simpson(|x| Ok(x.sin()), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert_abs_diff_eq!(i, 2.0, epsilon = 1e-11);
    }
}
