//! Fundamental forms, Christoffel symbols, Frenet frames and curvatures of
//! curves on a chart or an abstract metric.
//!
//! Orientation is fixed once: the unit normal is `Ψ_u × Ψ_v / W`, and every
//! signed quantity (`L, M, N`, `κ_n`) inherits it.

mod curve;
mod forms;
mod frame;
mod surface;

pub use curve::{check_unit_speed, curve_speed, CurveJets, CurvePoint, SurfaceCurve, UNIT_SPEED_TOL};
pub use forms::{
    christoffel, first_fundamental, metric_derivative_identities, metric_derivative_residuals,
    second_fundamental, ChristoffelSet, FirstForm, MetricDerivativeResiduals, SecondForm,
};
pub use frame::{
    beltrami_bracket, compose_curve, connection_cubic, frenet, frenet_at, geodesic_curvature,
    geodesic_curvature_at, normal_curvature, normal_curvature_from, FrameData, Weight,
    CURVATURE_FLOOR,
};
pub use surface::{
    AbstractMetric, DomainBox, MetricSource, PatchJets, Surface, SurfacePatch, METRIC_DET_FLOOR,
    REGULARITY_FLOOR,
};
