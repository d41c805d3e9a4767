//! Standard surfaces, curves and conformal pairs with known closed forms.
//!
//! Used by tests, benches and the example scenarios. All constructors parse
//! literal expressions and therefore cannot fail.

use std::f64::consts::PI;

use crate::conformal::{AmbientMap, ConformalPair};
use crate::exprkit::ScalarField;
use crate::geometry::{AbstractMetric, DomainBox, SurfaceCurve, SurfacePatch};

fn domain(u: (f64, f64), v: (f64, f64)) -> DomainBox {
    DomainBox::new(u, v).expect("fixture domain")
}

fn patch(x: &str, y: &str, z: &str, d: DomainBox) -> SurfacePatch {
    SurfacePatch::parse(x, y, z, d).expect("fixture patch")
}

fn curve(u: &str, v: &str) -> SurfaceCurve {
    SurfaceCurve::parse(u, v).expect("fixture curve")
}

fn uv(text: &str) -> ScalarField {
    ScalarField::parse(text, &["u", "v"]).expect("fixture field")
}

pub fn unit_box() -> DomainBox {
    domain((-1.0, 1.0), (-1.0, 1.0))
}

/// Polar-angle box avoiding the sphere's coordinate poles.
pub fn sphere_box() -> DomainBox {
    domain((0.0, 2.0 * PI), (0.2, PI - 0.2))
}

/// `(u, v, 0)`
pub fn plane() -> SurfacePatch {
    patch("u", "v", "0", unit_box())
}

/// `(3u, 3v, 0)`
pub fn plane_scaled3() -> SurfacePatch {
    patch("3*u", "3*v", "0", unit_box())
}

/// `(sin v cos u, sin v sin u, cos v)`
pub fn unit_sphere() -> SurfacePatch {
    sphere_scaled(1.0)
}

/// Origin-centered sphere of radius `r` in the same angular chart.
pub fn sphere_scaled(r: f64) -> SurfacePatch {
    patch(
        &format!("{r:?}*sin(v)*cos(u)"),
        &format!("{r:?}*sin(v)*sin(u)"),
        &format!("{r:?}*cos(v)"),
        sphere_box(),
    )
}

pub fn catenoid() -> SurfacePatch {
    patch("cosh(v)*cos(u)", "cosh(v)*sin(u)", "v", domain((-PI, PI), (-1.0, 1.0)))
}

pub fn helicoid() -> SurfacePatch {
    patch("sinh(v)*cos(u)", "sinh(v)*sin(u)", "u", domain((-PI, PI), (-1.0, 1.0)))
}

/// Inverse stereographic projection of the plane onto the unit sphere.
pub fn inverse_stereographic() -> SurfacePatch {
    patch(
        "2*u/(1 + u^2 + v^2)",
        "2*v/(1 + u^2 + v^2)",
        "(u^2 + v^2 - 1)/(1 + u^2 + v^2)",
        unit_box(),
    )
}

pub fn stereographic_dilation() -> ScalarField {
    uv("2/(1 + u^2 + v^2)")
}

pub fn flat_metric() -> AbstractMetric {
    AbstractMetric::parse("1", "0", "1", unit_box()).expect("fixture metric")
}

/// `E = G = e^{2u}, F = 0`
pub fn exp_scaled_metric() -> AbstractMetric {
    AbstractMetric::parse("exp(2*u)", "0", "exp(2*u)", unit_box()).expect("fixture metric")
}

/// Sphere of radius 2 centered at `(0, 0, 3)`.
pub fn offset_sphere() -> SurfacePatch {
    patch("2*sin(v)*cos(u)", "2*sin(v)*sin(u)", "3 + 2*cos(v)", sphere_box())
}

/// Image of [`offset_sphere`] under inversion `x ↦ x/|x|²`; `|x|² = 13 + 12 cos v`.
pub fn inverted_offset_sphere() -> SurfacePatch {
    patch(
        "2*sin(v)*cos(u)/(13 + 12*cos(v))",
        "2*sin(v)*sin(u)/(13 + 12*cos(v))",
        "(3 + 2*cos(v))/(13 + 12*cos(v))",
        sphere_box(),
    )
}

pub fn inversion_map() -> AmbientMap {
    AmbientMap::parse(["x/(x^2+y^2+z^2)", "y/(x^2+y^2+z^2)", "z/(x^2+y^2+z^2)"])
        .expect("fixture map")
}

pub fn scaling_map(c: f64) -> AmbientMap {
    AmbientMap::parse([
        format!("{c:?}*x").as_str(),
        format!("{c:?}*y").as_str(),
        format!("{c:?}*z").as_str(),
    ])
    .expect("fixture map")
}

pub fn identity_map() -> AmbientMap {
    AmbientMap::parse(["x", "y", "z"]).expect("fixture map")
}

/// `u = s, v = π/2` on [`unit_sphere`].
pub fn equator() -> SurfaceCurve {
    curve("s", "pi/2")
}

/// Unit-speed latitude `u = s / sin v0, v = v0` on [`unit_sphere`].
pub fn latitude(v0: f64) -> SurfaceCurve {
    curve(&format!("s/sin({v0:?})"), &format!("{v0:?}"))
}

/// Unit-speed latitude on a sphere of radius `r`.
pub fn latitude_on(r: f64, v0: f64) -> SurfaceCurve {
    curve(&format!("s/({r:?}*sin({v0:?}))"), &format!("{v0:?}"))
}

/// Unit-speed circle of radius `r` centered at `(a, b)` on [`plane`].
pub fn plane_circle(r: f64, a: f64, b: f64) -> SurfaceCurve {
    curve(
        &format!("{a:?} + {r:?}*cos(s/{r:?})"),
        &format!("{b:?} + {r:?}*sin(s/{r:?})"),
    )
}

/// Plane vs itself, declared isometry.
pub fn identity_plane_pair() -> ConformalPair {
    ConformalPair::new(plane().into(), plane().into())
        .with_dilation(uv("1"))
        .with_ambient_map(identity_map())
}

/// Plane vs inverse-stereographic sphere, `ζ = 2/(1+u²+v²)`.
pub fn stereographic_pair() -> ConformalPair {
    ConformalPair::new(plane().into(), inverse_stereographic().into())
        .with_dilation(stereographic_dilation())
}

/// Catenoid vs helicoid, the classical local isometry.
pub fn catenoid_helicoid_pair() -> ConformalPair {
    ConformalPair::new(catenoid().into(), helicoid().into()).with_dilation(uv("1"))
}

/// Flat metric vs `e^{2u}` scaling, `ζ = e^u`.
pub fn exp_metric_pair() -> ConformalPair {
    ConformalPair::new(flat_metric().into(), exp_scaled_metric().into()).with_dilation(uv("exp(u)"))
}

/// Unit sphere vs the sphere of radius `c`, `ζ ≡ c`.
pub fn sphere_homothety_pair(c: f64) -> ConformalPair {
    ConformalPair::new(unit_sphere().into(), sphere_scaled(c).into())
        .with_dilation(uv(&format!("{c:?}")))
        .with_ambient_map(scaling_map(c))
}

/// Plane vs `3 ×` plane, `ζ ≡ 3`.
pub fn plane_homothety_pair() -> ConformalPair {
    ConformalPair::new(plane().into(), plane_scaled3().into())
        .with_dilation(uv("3"))
        .with_ambient_map(scaling_map(3.0))
}

/// Offset sphere vs its inversion, `ζ = 1/(13 + 12 cos v)`.
pub fn inversion_pair() -> ConformalPair {
    ConformalPair::new(offset_sphere().into(), inverted_offset_sphere().into())
        .with_dilation(uv("1/(13 + 12*cos(v))"))
        .with_ambient_map(inversion_map())
}
