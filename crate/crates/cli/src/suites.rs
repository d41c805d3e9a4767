use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use confgeom::calculus::{fd_vec, FIRST_STEP, SECOND_STEP};
use confgeom::conformal::{
    christoffel_shift_at, geodesic_deviation_report, pushforward_residual, ConformalPair,
};
use confgeom::geometry::{
    christoffel, frenet, geodesic_curvature, metric_derivative_residuals, normal_curvature,
    DomainBox, FirstForm, MetricSource, Surface, SurfaceCurve, SurfacePatch, Weight,
};
use confgeom::grid::{linspace, try_map};
use confgeom::normalcurve::{classify_curve, normal_deviation, tangential_residual, Correction, Verdict};
use confgeom::{GeomError, Vec3};

use crate::error::RuntimeError;
use crate::scenario::{Job, NamedCurve, Scenario, SuiteKind};

/// One report file: a suite evaluated over its grid.
#[derive(Debug, Serialize)]
pub struct Section {
    pub scenario: String,
    pub digest: String,
    pub suite: String,
    pub kind: &'static str,
    pub subject: BTreeMap<&'static str, String>,
    pub tolerance: f64,
    pub pass: bool,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub seed: u64,
    pub points: usize,
    pub summary: BTreeMap<&'static str, Value>,
    pub columns: Vec<String>,
    pub residual_columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub wall_clock_ms: f64,
}

struct Table {
    columns: Vec<String>,
    residual_columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    summary: BTreeMap<&'static str, Value>,
    /// Overrides the residual-based verdict when set.
    verdict: Option<bool>,
}

impl Table {
    fn new(columns: &[&str], residual_columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            residual_columns: residual_columns.iter().map(|c| c.to_string()).collect(),
            rows,
            summary: BTreeMap::new(),
            verdict: None,
        }
    }

    fn residuals(&self) -> Vec<f64> {
        let idx: Vec<usize> = self
            .residual_columns
            .iter()
            .map(|r| self.columns.iter().position(|c| c == r).expect("residual column listed"))
            .collect();
        self.rows.iter().flat_map(|row| idx.iter().map(|&i| row[i])).collect()
    }
}

struct Ctx<'a> {
    job: &'a Job,
    scenario: &'a Scenario,
}

impl Ctx<'_> {
    fn element(&self) -> String {
        let j = self.job;
        let mut parts = Vec::new();
        if let Some(s) = &j.surface {
            parts.push(format!("surface '{}'", s.0));
        }
        if let Some(p) = &j.pair {
            parts.push(format!("pair '{}'", p.name));
        }
        if let Some(c) = &j.curve {
            parts.push(format!("curve '{}'", c.name));
        }
        if let Some(p) = &j.profile {
            parts.push(format!("profile '{}'", p.name));
        }
        parts.join(", ")
    }

    fn fail(&self, point: String, source: GeomError) -> RuntimeError {
        RuntimeError {
            suite: self.job.id.clone(),
            element: self.element(),
            point,
            source,
        }
    }

    fn at_uv(&self, (u, v): (f64, f64)) -> impl Fn(GeomError) -> RuntimeError + '_ {
        move |e| self.fail(format!("(u, v) = ({u}, {v})"), e)
    }

    fn at_s(&self, s: f64) -> impl Fn(GeomError) -> RuntimeError + '_ {
        move |e| self.fail(format!("s = {s}"), e)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.scenario.seed)
    }

    fn surface_grid(&self, d: &DomainBox) -> Vec<(f64, f64)> {
        let mut pts = d.lattice(self.scenario.grids.surface);
        let mut rng = self.rng();
        pts.extend((0..self.scenario.grids.random).map(|_| (rng.gen_range(d.u.0..=d.u.1), rng.gen_range(d.v.0..=d.v.1))));
        pts
    }

    fn curve_grid(&self, c: &NamedCurve) -> Vec<f64> {
        let (a, b) = c.s_range;
        let mut pts = linspace(a, b, self.scenario.grids.curve);
        let mut rng = self.rng();
        pts.extend((0..self.scenario.grids.random).map(|_| rng.gen_range(a..=b)));
        pts
    }

    fn patch<'s>(&self, s: &'s Surface, what: &'static str) -> Result<&'s SurfacePatch, RuntimeError> {
        s.require_patch(what).map_err(|e| self.fail("load".into(), e))
    }

    fn validate(&self, pair: &ConformalPair, pts: &[(f64, f64)]) -> Result<(), RuntimeError> {
        pair.validate(pts).map_err(|e| self.fail("pair validation".into(), e))
    }
}

pub fn run_job(scenario: &Scenario, job: &Job) -> Result<Section, RuntimeError> {
    let ctx = Ctx { job, scenario };
    let start = Instant::now();
    let table = match job.kind {
        SuiteKind::Forms => forms(&ctx)?,
        SuiteKind::Frenet => frenet_suite(&ctx)?,
        SuiteKind::ChristoffelShift => christoffel_suite(&ctx)?,
        SuiteKind::BracketShift => bracket_suite(&ctx)?,
        SuiteKind::GeodesicDeviation => geodesic_suite(&ctx)?,
        SuiteKind::Theorem3 => theorem3_suite(&ctx)?,
        SuiteKind::Tangential => tangential_suite(&ctx)?,
        SuiteKind::Classify => classify_suite(&ctx)?,
        SuiteKind::Pushforward => pushforward_suite(&ctx)?,
    };
    let residuals = table.residuals();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let mean_residual = if residuals.is_empty() {
        0.0
    } else {
        residuals.iter().sum::<f64>() / residuals.len() as f64
    };
    let within = residuals.iter().all(|r| *r < job.tolerance);
    let mut subject = BTreeMap::new();
    if let Some(s) = &job.surface {
        subject.insert("surface", s.0.clone());
    }
    if let Some(p) = &job.pair {
        subject.insert("pair", p.name.clone());
    }
    if let Some(c) = &job.curve {
        subject.insert("curve", c.name.clone());
    }
    if let Some(p) = &job.profile {
        subject.insert("profile", p.name.clone());
    }
    Ok(Section {
        scenario: scenario.stem.clone(),
        digest: scenario.digest.clone(),
        suite: job.id.clone(),
        kind: job.kind.name(),
        subject,
        tolerance: job.tolerance,
        pass: table.verdict.unwrap_or(true) && within,
        max_residual,
        mean_residual,
        seed: scenario.seed,
        points: table.rows.len(),
        summary: table.summary,
        columns: table.columns,
        residual_columns: table.residual_columns,
        rows: table.rows,
        wall_clock_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Largest violation of metric compatibility `∂g_ij = Γ^l_ki g_lj + Γ^l_kj g_il`.
fn compatibility_residual(m: &FirstForm) -> f64 {
    let c = christoffel(m);
    let (e, f, g) = (m.e, m.f, m.g);
    [
        m.e_u - 2.0 * (c.g111 * e + c.g112 * f),
        m.e_v - 2.0 * (c.g121 * e + c.g122 * f),
        m.f_u - (c.g111 * f + c.g112 * g + c.g121 * e + c.g122 * f),
        m.f_v - (c.g121 * f + c.g122 * g + c.g221 * e + c.g222 * f),
        m.g_u - 2.0 * (c.g121 * f + c.g122 * g),
        m.g_v - 2.0 * (c.g221 * f + c.g222 * g),
    ]
    .iter()
    .fold(0.0, |a, r| a.max(r.abs()))
}

fn forms(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let surface = &ctx.job.surface.as_ref().expect("resolved").1;
    let pts = ctx.surface_grid(&surface.domain());
    let rows = try_map(&pts, |&(u, v)| -> Result<Vec<f64>, RuntimeError> {
        let err = ctx.at_uv((u, v));
        let m = surface.first_form(u, v).map_err(&err)?;
        let c = christoffel(&m);
        let mut row = vec![u, v, m.e, m.f, m.g, m.w];
        let mut metric_ids = f64::NAN;
        match surface.as_patch() {
            Some(p) => {
                let j = p.regular_jets(u, v).map_err(&err)?;
                let sf = confgeom::geometry::SecondForm::from_jets(&j);
                row.extend([sf.l, sf.m, sf.n]);
                metric_ids = metric_derivative_residuals(&j, &m).max();
            }
            None => row.extend([f64::NAN; 3]),
        }
        row.extend(c.to_array());
        row.push(compatibility_residual(&m));
        row.push(if metric_ids.is_nan() { 0.0 } else { metric_ids });
        Ok(row)
    })?;
    let mut t = Table::new(
        &[
            "u", "v", "E", "F", "G", "W", "L", "M", "N", "g111", "g112", "g121", "g122", "g221", "g222",
            "compatibility", "metric_identities",
        ],
        &["compatibility", "metric_identities"],
        rows,
    );
    t.summary.insert("embedded", json!(surface.as_patch().is_some()));
    Ok(t)
}

fn frenet_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let nc = ctx.job.curve.as_ref().expect("resolved");
    let surface = curve_surface(ctx, nc);
    let p = ctx.patch(&surface, "Frenet frame")?;
    let grid = ctx.curve_grid(nc);
    let rows = try_map(&grid, |&s| -> Result<Vec<f64>, RuntimeError> {
        let err = ctx.at_s(s);
        let f = frenet(p, &nc.curve, s).map_err(&err)?;
        let kn = normal_curvature(p, &nc.curve, s).map_err(&err)?;
        let kg = geodesic_curvature(p, &nc.curve, s, Weight::W1).map_err(&err)?;
        let k2 = f.kappa * f.kappa;
        let split = (k2 - kn * kn - kg * kg).abs() / k2.max(1.0);
        let tau = f.torsion().unwrap_or(f64::NAN);
        let cp = nc.curve.point(s).map_err(&err)?;
        Ok(vec![s, cp.u.value, cp.v.value, f.kappa, tau, kn, kg, split])
    })?;
    Ok(Table::new(
        &["s", "u", "v", "kappa", "tau", "kappa_n", "kappa_g", "curvature_split"],
        &["curvature_split"],
        rows,
    ))
}

fn curve_surface(ctx: &Ctx, nc: &NamedCurve) -> Surface {
    ctx.scenario
        .surfaces
        .get(&nc.surface)
        .cloned()
        .expect("curve surface resolved at load")
}

fn christoffel_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let pair = &ctx.job.pair.as_ref().expect("resolved").pair;
    let pts = ctx.surface_grid(&pair.source.domain());
    ctx.validate(pair, &pts)?;
    let rows = try_map(&pts, |&(u, v)| -> Result<Vec<f64>, RuntimeError> {
        let pp = pair.at(u, v).map_err(ctx.at_uv((u, v)))?;
        let sh = christoffel_shift_at(&pp);
        let mut row = vec![u, v, pp.zeta.value];
        row.extend(pp.estimate.residuals);
        row.extend(sh.theta.to_array());
        row.extend(sh.residuals);
        Ok(row)
    })?;
    Ok(Table::new(
        &[
            "u", "v", "zeta", "conformal_e", "conformal_f", "conformal_g", "theta111", "theta112", "theta121",
            "theta122", "theta221", "theta222", "r111", "r112", "r121", "r122", "r221", "r222",
        ],
        &["r111", "r112", "r121", "r122", "r221", "r222"],
        rows,
    ))
}

fn curve_pair<'a>(ctx: &'a Ctx) -> (&'a ConformalPair, &'a NamedCurve) {
    let pair = &ctx.job.pair.as_ref().expect("resolved").pair;
    let nc = ctx.job.curve.as_ref().expect("resolved");
    (pair, nc)
}

fn curve_uv(c: &SurfaceCurve, s: f64) -> Result<(f64, f64), GeomError> {
    let cp = c.point(s)?;
    Ok((cp.u.value, cp.v.value))
}

fn validate_along(ctx: &Ctx, pair: &ConformalPair, nc: &NamedCurve, grid: &[f64]) -> Result<(), RuntimeError> {
    let pts = grid
        .iter()
        .map(|&s| curve_uv(&nc.curve, s).map_err(ctx.at_s(s)))
        .collect::<Result<Vec<_>, _>>()?;
    ctx.validate(pair, &pts)
}

fn bracket_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let (pair, nc) = curve_pair(ctx);
    let grid = ctx.curve_grid(nc);
    validate_along(ctx, pair, nc, &grid)?;
    let rows = try_map(&grid, |&s| -> Result<Vec<f64>, RuntimeError> {
        let r = geodesic_deviation_report(pair, &nc.curve, s).map_err(ctx.at_s(s))?;
        Ok(vec![s, r.u, r.v, r.zeta, r.bracket.b_src, r.bracket.b_tgt, r.bracket.theta_bracket, r.bracket.residual])
    })?;
    Ok(Table::new(
        &["s", "u", "v", "zeta", "b_source", "b_target", "theta_bracket", "residual"],
        &["residual"],
        rows,
    ))
}

/// `(β′ × β″)·N` of the curve image on `p`, derivatives by central differences.
fn direct_geodesic_curvature(p: &SurfacePatch, c: &SurfaceCurve, s: f64) -> Result<f64, GeomError> {
    let pos = |s: f64| -> Result<Vec3, GeomError> {
        let (u, v) = curve_uv(c, s)?;
        p.position(u, v)
    };
    let d1 = fd_vec(pos, s, 1, FIRST_STEP)?;
    let d2 = fd_vec(pos, s, 2, SECOND_STEP)?;
    let (u, v) = curve_uv(c, s)?;
    let n = p.regular_jets(u, v)?.area_normal().normalize();
    Ok(d1.cross(&d2).dot(&n))
}

fn geodesic_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let (pair, nc) = curve_pair(ctx);
    let grid = ctx.curve_grid(nc);
    validate_along(ctx, pair, nc, &grid)?;
    let reports = try_map(&grid, |&s| geodesic_deviation_report(pair, &nc.curve, s).map_err(ctx.at_s(s)))?;

    let mut summary = BTreeMap::new();
    let pinned = match (ctx.job.pairing, pair.source.as_patch(), pair.target.as_patch()) {
        (Some(p), _, _) => {
            summary.insert("pairing_method", json!("declared"));
            Some(p)
        }
        (None, Some(sp), Some(tp)) => {
            summary.insert("pairing_method", json!("oracle"));
            let mut ok = [[true; 2]; 2];
            for r in &reports {
                let direct = [
                    direct_geodesic_curvature(tp, &nc.curve, r.s).map_err(ctx.at_s(r.s))?,
                    direct_geodesic_curvature(sp, &nc.curve, r.s).map_err(ctx.at_s(r.s))?,
                ];
                let close = |k: f64, d: f64| (k - d).abs() < 1e-5 * d.abs().max(1.0);
                for (side, kg) in [r.kappa_g_target, r.kappa_g_source].into_iter().enumerate() {
                    for (w, k) in kg.into_iter().enumerate() {
                        ok[side][w] &= close(k, direct[side]);
                    }
                }
            }
            let pick = |ok: [bool; 2]| Weight::ALL.into_iter().zip(ok).find(|(_, k)| *k).map(|(w, _)| w);
            pick(ok[0]).zip(pick(ok[1]))
        }
        _ => {
            summary.insert("pairing_method", json!("default"));
            Some((Weight::W1, Weight::W1))
        }
    };
    summary.insert(
        "pinned_pairing",
        pinned.map_or(Value::Null, |(t, s)| json!(format!("{}/{}", t.label(), s.label()))),
    );

    let rows = reports
        .iter()
        .map(|r| {
            let mut row = vec![r.s, r.u, r.v, r.zeta, r.f];
            row.extend(r.kappa_g_source);
            row.extend(r.kappa_g_target);
            row.push(r.bracket.residual);
            row.extend(r.pairings.iter().map(|p| p.residual));
            row.push(pinned.map_or(f64::INFINITY, |(t, s)| r.pairing(t, s).residual));
            row
        })
        .collect();
    let mut t = Table::new(
        &[
            "s", "u", "v", "zeta", "f", "kappa_g_source_w1", "kappa_g_source_w2", "kappa_g_target_w1",
            "kappa_g_target_w2", "bracket_residual", "r_w1_w1", "r_w1_w2", "r_w2_w1", "r_w2_w2",
            "pinned_residual",
        ],
        &["bracket_residual", "pinned_residual"],
        rows,
    );
    t.summary = summary;
    t.verdict = Some(pinned.is_some());
    Ok(t)
}

fn theorem3_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let (pair, nc) = curve_pair(ctx);
    let prof = ctx.job.profile.as_ref().expect("resolved");
    let grid = ctx.curve_grid(nc);
    validate_along(ctx, pair, nc, &grid)?;
    let rows = try_map(&grid, |&s| -> Result<Vec<f64>, RuntimeError> {
        let d = normal_deviation(pair, &nc.curve, &prof.nu, &prof.eta, s).map_err(ctx.at_s(s))?;
        let (u, v) = curve_uv(&nc.curve, s).map_err(ctx.at_s(s))?;
        Ok(vec![
            s,
            u,
            v,
            d.zeta,
            d.kappa,
            d.kappa_n_source,
            d.kappa_n_target,
            d.h,
            d.lhs,
            d.rhs_as_printed,
            d.rhs_zeta4_on_h,
            d.residual_as_printed,
            d.residual_zeta4_on_h,
        ])
    })?;
    let binding = match ctx.job.correction {
        Correction::AsPrinted => "residual_as_printed",
        Correction::Zeta4OnH => "residual_zeta4_on_h",
    };
    let mut t = Table::new(
        &[
            "s", "u", "v", "zeta", "kappa", "kappa_n_source", "kappa_n_target", "h", "lhs", "rhs_as_printed",
            "rhs_zeta4_on_h", "residual_as_printed", "residual_zeta4_on_h",
        ],
        &[binding],
        rows,
    );
    t.summary.insert("correction", json!(ctx.job.correction.label()));
    for (k, c) in [("max_as_printed", 11), ("max_zeta4_on_h", 12)] {
        t.summary.insert(k, json!(t.rows.iter().map(|r| r[c]).fold(0.0, f64::max)));
    }
    Ok(t)
}

fn tangential_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let (pair, nc) = curve_pair(ctx);
    let prof = ctx.job.profile.as_ref().expect("resolved");
    let grid = ctx.curve_grid(nc);
    validate_along(ctx, pair, nc, &grid)?;
    let rows = try_map(&grid, |&s| -> Result<Vec<f64>, RuntimeError> {
        let t = tangential_residual(pair, &nc.curve, &prof.nu, &prof.eta, s, ctx.job.direction)
            .map_err(ctx.at_s(s))?;
        Ok(vec![s, t.g1, t.g2, t.lhs_u, t.rhs_u, t.lhs_v, t.rhs_v, t.lhs_t, t.rhs_t, t.r_u, t.r_v, t.r_t])
    })?;
    let mut t = Table::new(
        &["s", "g1", "g2", "lhs_u", "rhs_u", "lhs_v", "rhs_v", "lhs_t", "rhs_t", "r_u", "r_v", "r_t"],
        &["r_u", "r_v", "r_t"],
        rows,
    );
    t.summary.insert(
        "direction",
        ctx.job.direction.map_or(json!("tangent"), |(a, b)| json!([a, b])),
    );
    Ok(t)
}

fn verdict_name(v: Verdict) -> Value {
    serde_json::to_value(v).expect("verdict serializes")
}

fn classify_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let nc = ctx.job.curve.as_ref().expect("resolved");
    let surface = curve_surface(ctx, nc);
    let p = ctx.patch(&surface, "classification")?;
    let grid = ctx.curve_grid(nc);
    let class = classify_curve(p, &nc.curve, &grid, ctx.job.tolerance)
        .map_err(|e| ctx.fail(format!("s in [{}, {}]", nc.s_range.0, nc.s_range.1), e))?;
    let rows = try_map(&grid, |&s| -> Result<Vec<f64>, RuntimeError> {
        let f = frenet(p, &nc.curve, s).map_err(ctx.at_s(s))?;
        let (cn, cb) = f
            .normal_pair()
            .map(|(n, b)| (f.beta.dot(&n), f.beta.dot(&b)))
            .unwrap_or((f64::NAN, f64::NAN));
        Ok(vec![s, f.kappa, f.beta.dot(&f.t), cn, cb, f.beta.norm_squared()])
    })?;
    let mut t = Table::new(&["s", "kappa", "c_t", "c_n", "c_b", "beta_norm2"], &[], rows);
    t.summary.insert("verdict", verdict_name(class.verdict));
    t.summary.insert("satisfied", json!(class.satisfied.iter().map(|v| verdict_name(*v)).collect::<Vec<_>>()));
    t.summary.insert("max_ct", json!(class.max_ct));
    t.summary.insert("max_cn", json!(class.max_cn));
    t.summary.insert("max_cb", json!(class.max_cb));
    t.summary.insert("min_kappa", json!(class.min_kappa));
    if let Some(e) = ctx.job.expect {
        t.summary.insert("expected", verdict_name(e));
    }
    t.verdict = Some(match ctx.job.expect {
        Some(e) => e == class.verdict,
        None => class.verdict != Verdict::Undefined,
    });
    Ok(t)
}

fn pushforward_suite(ctx: &Ctx) -> Result<Table, RuntimeError> {
    let pair = &ctx.job.pair.as_ref().expect("resolved").pair;
    let pts = ctx.surface_grid(&pair.source.domain());
    ctx.validate(pair, &pts)?;
    let rows = try_map(&pts, |&(u, v)| -> Result<Vec<f64>, RuntimeError> {
        let r = pushforward_residual(pair, u, v).map_err(ctx.at_uv((u, v)))?;
        Ok(vec![u, v, r.zeta, r.ambient_scale, r.r_u, r.r_v])
    })?;
    Ok(Table::new(&["u", "v", "zeta", "ambient_scale", "r_u", "r_v"], &["r_u", "r_v"], rows))
}
