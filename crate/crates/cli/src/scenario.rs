//! Scenario documents: named surfaces, curves, pairs and profiles, plus the
//! suites to run over them.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use confgeom::calculus::reparameterize_arclength;
use confgeom::conformal::{AmbientMap, ConformalPair, CONFORMALITY_TOL};
use confgeom::exprkit::ScalarField;
use confgeom::geometry::{AbstractMetric, DomainBox, Surface, SurfaceCurve, SurfacePatch, Weight};
use confgeom::normalcurve::{Correction, Verdict};

use crate::error::ConfigError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub surfaces: Vec<SurfaceSpec>,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
    #[serde(default)]
    pub pairs: Vec<PairSpec>,
    #[serde(default)]
    pub profiles: Vec<ProfileSpec>,
    #[serde(default)]
    pub suites: Vec<SuiteSpec>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub grids: GridSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub name: String,
    /// `[x, y, z]` over `u, v`.
    pub patch: Option<[String; 3]>,
    /// `[E, F, G]` over `u, v`.
    pub metric: Option<[String; 3]>,
    pub domain: DomainSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReparamSpec {
    pub t_range: (f64, f64),
    #[serde(default = "default_panels")]
    pub panels: usize,
}

fn default_panels() -> usize {
    256
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
    /// Surface on which the curve is unit speed.
    pub surface: String,
    pub u: String,
    pub v: String,
    pub s_range: Option<(f64, f64)>,
    /// When present, `u, v` are expressions in a raw parameter `t` and the
    /// curve is resampled by arc length.
    pub reparam: Option<ReparamSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub zeta: Option<String>,
    pub ambient_map: Option<[String; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub name: String,
    pub nu: String,
    pub eta: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    Forms,
    Frenet,
    ChristoffelShift,
    BracketShift,
    GeodesicDeviation,
    Theorem3,
    Tangential,
    Classify,
    Pushforward,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 9] = [
        SuiteKind::Forms,
        SuiteKind::Frenet,
        SuiteKind::ChristoffelShift,
        SuiteKind::BracketShift,
        SuiteKind::GeodesicDeviation,
        SuiteKind::Theorem3,
        SuiteKind::Tangential,
        SuiteKind::Classify,
        SuiteKind::Pushforward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Forms => "forms",
            SuiteKind::Frenet => "frenet",
            SuiteKind::ChristoffelShift => "christoffel-shift",
            SuiteKind::BracketShift => "bracket-shift",
            SuiteKind::GeodesicDeviation => "geodesic-deviation",
            SuiteKind::Theorem3 => "theorem3",
            SuiteKind::Tangential => "tangential",
            SuiteKind::Classify => "classify",
            SuiteKind::Pushforward => "pushforward",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            SuiteKind::Forms => 1e-9,
            SuiteKind::ChristoffelShift => 1e-7,
            SuiteKind::GeodesicDeviation | SuiteKind::Theorem3 | SuiteKind::Tangential => 1e-6,
            _ => 1e-8,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub suite: String,
    pub id: Option<String>,
    pub surface: Option<String>,
    pub curve: Option<String>,
    pub pair: Option<String>,
    pub profile: Option<String>,
    /// Target/source weights for geodesic deviation; pinned by the
    /// direct-curvature oracle when absent.
    pub pairing: Option<(Weight, Weight)>,
    pub correction: Option<Correction>,
    /// Direction coefficients `(a, b)` for the combined tangential check.
    pub direction: Option<(f64, f64)>,
    pub expect: Option<Verdict>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_surface_grid")]
    pub surface: usize,
    #[serde(default = "default_curve_grid")]
    pub curve: usize,
    /// Extra points drawn from the seeded generator.
    #[serde(default)]
    pub random: usize,
}

fn default_surface_grid() -> usize {
    8
}

fn default_curve_grid() -> usize {
    10
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            surface: default_surface_grid(),
            curve: default_curve_grid(),
            random: 0,
        }
    }
}

/// Command-line overrides applied on top of the scenario.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

pub struct NamedCurve {
    pub name: String,
    pub surface: String,
    pub curve: SurfaceCurve,
    pub s_range: (f64, f64),
}

pub struct NamedProfile {
    pub name: String,
    pub nu: ScalarField,
    pub eta: ScalarField,
}

pub struct NamedPair {
    pub name: String,
    pub pair: ConformalPair,
}

/// A suite entry with every reference resolved.
pub struct Job {
    pub id: String,
    pub kind: SuiteKind,
    pub tolerance: f64,
    pub surface: Option<Arc<(String, Surface)>>,
    pub curve: Option<Arc<NamedCurve>>,
    pub pair: Option<Arc<NamedPair>>,
    pub profile: Option<Arc<NamedProfile>>,
    pub pairing: Option<(Weight, Weight)>,
    pub correction: Correction,
    pub direction: Option<(f64, f64)>,
    pub expect: Option<Verdict>,
}

pub struct Scenario {
    pub stem: String,
    pub digest: String,
    pub seed: u64,
    pub grids: GridSpec,
    pub surfaces: BTreeMap<String, Surface>,
    pub jobs: Vec<Job>,
}

fn field(text: &str, vars: &[&str], key: &str) -> Result<ScalarField, ConfigError> {
    ScalarField::parse(text, vars).map_err(|e| ConfigError::at(key, e))
}

fn domain(d: &DomainSpec, key: &str) -> Result<DomainBox, ConfigError> {
    DomainBox::new(d.u, d.v).map_err(|e| ConfigError::at(format!("{key}.domain"), e))
}

fn check_unique<'a>(names: impl Iterator<Item = &'a str>, section: &str) -> Result<(), ConfigError> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(ConfigError::new(section, format!("duplicate name '{n}'")));
        }
    }
    Ok(())
}

fn lookup<'a, T>(
    map: &'a BTreeMap<String, Arc<T>>,
    name: &str,
    key: &str,
    what: &str,
) -> Result<&'a Arc<T>, ConfigError> {
    map.get(name)
        .ok_or_else(|| ConfigError::new(key, format!("unknown {what} '{name}'")))
}

fn tolerance(value: f64, key: &str) -> Result<f64, ConfigError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::new(key, format!("tolerance must be positive, got {value}")))
    }
}

pub fn load(path: &Path, ov: &Overrides) -> Result<Scenario, ConfigError> {
    let bytes = std::fs::read(path)
        .map_err(|e| ConfigError::new("scenario", format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_slice(&bytes)
        .map_err(|e| ConfigError::new("scenario", format!("{}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    let digest = {
        use sha2::{Digest, Sha256};
        let hash = Sha256::digest(&bytes);
        hash.iter().map(|b| format!("{b:02x}")).collect()
    };
    resolve(file, stem, digest, ov)
}

pub fn resolve(file: ScenarioFile, stem: String, digest: String, ov: &Overrides) -> Result<Scenario, ConfigError> {
    check_unique(file.surfaces.iter().map(|s| s.name.as_str()), "surfaces")?;
    check_unique(file.curves.iter().map(|s| s.name.as_str()), "curves")?;
    check_unique(file.pairs.iter().map(|s| s.name.as_str()), "pairs")?;
    check_unique(file.profiles.iter().map(|s| s.name.as_str()), "profiles")?;

    for (k, v) in &file.tolerances {
        tolerance(*v, &format!("tolerances.{k}"))?;
        if !matches!(k.as_str(), "default" | "conformality") && SuiteKind::from_name(k).is_none() {
            return Err(ConfigError::new(format!("tolerances.{k}"), "unknown tolerance key"));
        }
    }
    if let Some(t) = ov.tol {
        tolerance(t, "--tol")?;
    }
    let mut grids = file.grids;
    if let Some(n) = ov.grid {
        grids.surface = n;
        grids.curve = n;
    }
    if grids.surface < 1 || grids.curve < 1 {
        return Err(ConfigError::new("grids", "grid sizes must be at least 1"));
    }

    let mut surfaces = BTreeMap::new();
    for (i, s) in file.surfaces.iter().enumerate() {
        let key = format!("surfaces[{i}]");
        let d = domain(&s.domain, &key)?;
        let surface: Surface = match (&s.patch, &s.metric) {
            (Some([x, y, z]), None) => SurfacePatch {
                x: field(x, &["u", "v"], &format!("{key}.patch[0]"))?,
                y: field(y, &["u", "v"], &format!("{key}.patch[1]"))?,
                z: field(z, &["u", "v"], &format!("{key}.patch[2]"))?,
                domain: d,
            }
            .into(),
            (None, Some([e, f, g])) => AbstractMetric {
                e: field(e, &["u", "v"], &format!("{key}.metric[0]"))?,
                f: field(f, &["u", "v"], &format!("{key}.metric[1]"))?,
                g: field(g, &["u", "v"], &format!("{key}.metric[2]"))?,
                domain: d,
            }
            .into(),
            _ => return Err(ConfigError::new(key, "exactly one of 'patch' or 'metric' is required")),
        };
        surfaces.insert(s.name.clone(), Arc::new((s.name.clone(), surface)));
    }

    let mut curves = BTreeMap::new();
    for (i, c) in file.curves.iter().enumerate() {
        let key = format!("curves[{i}]");
        let surface = lookup(&surfaces, &c.surface, &format!("{key}.surface"), "surface")?;
        let (curve, s_range) = match &c.reparam {
            None => {
                let u = field(&c.u, &["s"], &format!("{key}.u"))?;
                let v = field(&c.v, &["s"], &format!("{key}.v"))?;
                let range = c
                    .s_range
                    .ok_or_else(|| ConfigError::new(format!("{key}.s_range"), "required for analytic curves"))?;
                (SurfaceCurve::Analytic { u, v }, range)
            }
            Some(r) => {
                let u = field(&c.u, &["t"], &format!("{key}.u"))?;
                let v = field(&c.v, &["t"], &format!("{key}.v"))?;
                let patch = surface
                    .1
                    .require_patch("arc-length resampling")
                    .map_err(|e| ConfigError::at(format!("{key}.reparam"), e))?;
                let table = reparameterize_arclength(patch, &u, &v, r.t_range.0, r.t_range.1, r.panels)
                    .map_err(|e| ConfigError::at(format!("{key}.reparam"), e))?;
                let range = c.s_range.unwrap_or((0.0, table.length()));
                (SurfaceCurve::from(table), range)
            }
        };
        if !(s_range.1 > s_range.0) {
            return Err(ConfigError::new(format!("{key}.s_range"), "range must be increasing"));
        }
        curves.insert(
            c.name.clone(),
            Arc::new(NamedCurve {
                name: c.name.clone(),
                surface: c.surface.clone(),
                curve,
                s_range,
            }),
        );
    }

    let conformality = file.tolerances.get("conformality").copied().unwrap_or(CONFORMALITY_TOL);
    let mut pairs = BTreeMap::new();
    for (i, p) in file.pairs.iter().enumerate() {
        let key = format!("pairs[{i}]");
        let source = lookup(&surfaces, &p.source, &format!("{key}.source"), "surface")?;
        let target = lookup(&surfaces, &p.target, &format!("{key}.target"), "surface")?;
        if source.1.domain() != target.1.domain() {
            return Err(ConfigError::new(key, "source and target must share a domain box"));
        }
        let mut pair = ConformalPair::new(source.1.clone(), target.1.clone()).with_tolerance(conformality);
        if let Some(z) = &p.zeta {
            pair = pair.with_dilation(field(z, &["u", "v"], &format!("{key}.zeta"))?);
        }
        if let Some([x, y, z]) = &p.ambient_map {
            let map = AmbientMap::parse([x, y, z]).map_err(|e| ConfigError::at(format!("{key}.ambient_map"), e))?;
            pair = pair.with_ambient_map(map);
        }
        pairs.insert(p.name.clone(), Arc::new(NamedPair { name: p.name.clone(), pair }));
    }

    let mut profiles = BTreeMap::new();
    for (i, p) in file.profiles.iter().enumerate() {
        let key = format!("profiles[{i}]");
        profiles.insert(
            p.name.clone(),
            Arc::new(NamedProfile {
                name: p.name.clone(),
                nu: field(&p.nu, &["s"], &format!("{key}.nu"))?,
                eta: field(&p.eta, &["s"], &format!("{key}.eta"))?,
            }),
        );
    }

    for name in &ov.suites {
        if SuiteKind::from_name(name).is_none() {
            return Err(ConfigError::new("--suite", format!("unknown suite '{name}'")));
        }
    }

    let mut jobs = Vec::new();
    let mut ids = BTreeMap::<String, usize>::new();
    for (i, s) in file.suites.iter().enumerate() {
        let key = format!("suites[{i}]");
        let kind = SuiteKind::from_name(&s.suite)
            .ok_or_else(|| ConfigError::new(format!("{key}.suite"), format!("unknown suite '{}'", s.suite)))?;
        if !ov.suites.is_empty() && !ov.suites.iter().any(|n| n == kind.name()) {
            continue;
        }
        if let Some(t) = s.tolerance {
            tolerance(t, &format!("{key}.tolerance"))?;
        }
        let need = |v: &'_ Option<String>, what: &str| -> Result<String, ConfigError> {
            v.clone()
                .ok_or_else(|| ConfigError::new(format!("{key}.{what}"), format!("required by suite '{}'", kind.name())))
        };
        let mut job = Job {
            id: String::new(),
            kind,
            tolerance: ov
                .tol
                .or(s.tolerance)
                .or_else(|| file.tolerances.get(kind.name()).copied())
                .or_else(|| file.tolerances.get("default").copied())
                .unwrap_or_else(|| kind.default_tolerance()),
            surface: None,
            curve: None,
            pair: None,
            profile: None,
            pairing: s.pairing,
            correction: s.correction.unwrap_or(Correction::Zeta4OnH),
            direction: s.direction,
            expect: s.expect,
        };
        match kind {
            SuiteKind::Forms => {
                job.surface = Some(lookup(&surfaces, &need(&s.surface, "surface")?, &format!("{key}.surface"), "surface")?.clone());
            }
            SuiteKind::Frenet | SuiteKind::Classify => {
                job.curve = Some(lookup(&curves, &need(&s.curve, "curve")?, &format!("{key}.curve"), "curve")?.clone());
            }
            SuiteKind::ChristoffelShift | SuiteKind::Pushforward => {
                job.pair = Some(lookup(&pairs, &need(&s.pair, "pair")?, &format!("{key}.pair"), "pair")?.clone());
            }
            SuiteKind::BracketShift | SuiteKind::GeodesicDeviation => {
                job.pair = Some(lookup(&pairs, &need(&s.pair, "pair")?, &format!("{key}.pair"), "pair")?.clone());
                job.curve = Some(lookup(&curves, &need(&s.curve, "curve")?, &format!("{key}.curve"), "curve")?.clone());
            }
            SuiteKind::Theorem3 | SuiteKind::Tangential => {
                job.pair = Some(lookup(&pairs, &need(&s.pair, "pair")?, &format!("{key}.pair"), "pair")?.clone());
                job.curve = Some(lookup(&curves, &need(&s.curve, "curve")?, &format!("{key}.curve"), "curve")?.clone());
                job.profile = Some(lookup(&profiles, &need(&s.profile, "profile")?, &format!("{key}.profile"), "profile")?.clone());
            }
        }
        if let (Some(pair), Some(curve)) = (&job.pair, &job.curve) {
            let src = file.pairs.iter().find(|p| p.name == pair.name).map(|p| p.source.as_str());
            if src != Some(curve.surface.as_str()) {
                return Err(ConfigError::new(
                    format!("{key}.curve"),
                    format!("curve '{}' lives on '{}', not on the source of pair '{}'", curve.name, curve.surface, pair.name),
                ));
            }
        }
        let base = s.id.clone().unwrap_or_else(|| kind.name().to_string());
        if base.is_empty() || base.contains(['/', '\\']) {
            return Err(ConfigError::new(format!("{key}.id"), "suite id must be a plain file-name fragment"));
        }
        let n = ids.entry(base.clone()).or_insert(0);
        *n += 1;
        job.id = if *n == 1 { base } else { format!("{base}-{n}") };
        jobs.push(job);
    }
    let mut seen = std::collections::BTreeSet::new();
    for j in &jobs {
        if !seen.insert(j.id.clone()) {
            return Err(ConfigError::new("suites", format!("duplicate suite id '{}'", j.id)));
        }
    }

    Ok(Scenario {
        stem,
        digest,
        seed: ov.seed.unwrap_or(file.seed),
        grids,
        surfaces: surfaces.into_iter().map(|(k, v)| (k, v.1.clone())).collect(),
        jobs,
    })
}

