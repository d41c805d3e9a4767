use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confgeom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_scenario(path: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["--scenario", path.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn write_scenario(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("case.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn identity_plane_all_suites_pass_with_zero_residuals() {
    let out = tempfile::tempdir().unwrap();
    let o = run_scenario(&scenario("identity_plane.json"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let suites = [
        "forms", "frenet", "christoffel-shift", "bracket-shift", "geodesic-deviation", "theorem3", "tangential",
        "classify", "pushforward",
    ];
    for s in suites {
        let r = read_json(out.path().join(format!("identity_plane.{s}.json")));
        assert_eq!(r["pass"], true, "{s}");
        assert_eq!(r["max_residual"].as_f64(), Some(0.0), "{s}");
        let cols: Vec<&str> = r["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        for rc in r["residual_columns"].as_array().unwrap() {
            let i = cols.iter().position(|c| *c == rc.as_str().unwrap()).unwrap();
            for row in r["rows"].as_array().unwrap() {
                assert_eq!(row[i].as_f64(), Some(0.0), "{s} {rc}");
            }
        }
    }
}

#[test]
fn missing_scenario_is_a_config_error() {
    let out = tempfile::tempdir().unwrap();
    let missing = out.path().join("nowhere.json");
    let o = run_scenario(&missing, out.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere.json"), "{}", stderr(&o));
}

#[test]
fn anisotropic_stretch_is_a_runtime_error() {
    let out = tempfile::tempdir().unwrap();
    let o = run_scenario(&scenario("anisotropic.json"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(e.contains("not conformal") && e.contains("[0.0, 0.0, 3.0]"), "{e}");
    assert!(e.contains("pair 'stretch'"), "{e}");
}

#[test]
fn zoo_suites_pass() {
    let out = tempfile::tempdir().unwrap();
    let o = run_scenario(&scenario("conformal_zoo.json"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", String::from_utf8_lossy(&o.stdout), stderr(&o));
    let iso = read_json(out.path().join("conformal_zoo.christoffel-shift.json"));
    assert_eq!(iso["subject"]["pair"], "isometry");
    assert!(iso["max_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(iso["points"], 64);
    let eq = read_json(out.path().join("conformal_zoo.classify.json"));
    assert_eq!(eq["summary"]["verdict"], "normal");
    assert_eq!(eq["pass"], true);
    let off = read_json(out.path().join("conformal_zoo.classify-3.json"));
    assert_eq!(off["summary"]["verdict"], "osculating");
}

#[test]
fn geodesic_deviation_reports_four_pairings() {
    let out = tempfile::tempdir().unwrap();
    let o = run_scenario(&scenario("stereographic.json"), out.path(), &["--suite", "geodesic-deviation"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read_json(out.path().join("stereographic.geodesic-deviation-axis.json"));
    assert_eq!(r["summary"]["pairing_method"], "oracle");
    assert_eq!(r["summary"]["pinned_pairing"], "W1/W1");
    let cols = r["columns"].as_array().unwrap();
    for c in ["r_w1_w1", "r_w1_w2", "r_w2_w1", "r_w2_w2"] {
        assert!(cols.iter().any(|x| x == c));
    }
    // only the requested suite ran
    assert!(!out.path().join("stereographic.forms.json").exists());
}

#[test]
fn deviation_table_fails_off_the_pinned_cases() {
    let out = tempfile::tempdir().unwrap();
    let o = run_scenario(&scenario("deviation_table.json"), out.path(), &["--format", "table"]);
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(out.path().join("deviation_table.stereo-circle.csv")).unwrap();
    assert!(csv.starts_with("s,u,v,zeta,f,"));
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn reports_are_deterministic_apart_from_wall_clock() {
    let strip = |dir: &Path| -> Vec<String> {
        let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files
            .iter()
            .map(|p| {
                let mut v = read_json(p.clone());
                v.as_object_mut().unwrap().remove("wall_clock_ms");
                v.to_string()
            })
            .collect()
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = run_scenario(&scenario("stereographic.json"), d.path(), &["--seed", "11"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(strip(a.path()), strip(b.path()));
    let r = read_json(a.path().join("stereographic.forms.json"));
    assert_eq!(r["seed"], 11);
    assert_eq!(r["points"], 64 + 5);
}

#[test]
fn overrides_change_grid_and_tolerance() {
    let out = tempfile::tempdir().unwrap();
    let o = run_scenario(&scenario("stereographic.json"), out.path(), &["--grid", "3", "--suite", "forms"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(out.path().join("stereographic.forms.json"))["points"], 9 + 5);
    let o = run_scenario(&scenario("stereographic.json"), out.path(), &["--tol", "1e-30", "--suite", "christoffel-shift"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_flags_are_config_errors() {
    let out = tempfile::tempdir().unwrap();
    let o = run_scenario(&scenario("identity_plane.json"), out.path(), &["--suite", "curvature"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--suite"));
    let o = run_scenario(&scenario("identity_plane.json"), out.path(), &["--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

const BASE: &str = r#"{
  "surfaces": [ { "name": "plane", "patch": ["u", "v", "0"], "domain": { "u": [-1, 1], "v": [-1, 1] } } ],
  "curves": [ { "name": "c", "surface": "plane", "u": "0.5*cos(s/0.5)", "v": "0.5*sin(s/0.5)", "s_range": [0, 3] } ],
  "pairs": [ { "name": "p", "source": "plane", "target": "plane", "zeta": "1" } ],
  "profiles": [ { "name": "f", "nu": "1", "eta": "s" } ],
  "suites": [ { "suite": "theorem3", "pair": "p", "curve": "c", "profile": "f" } ],
  "tolerances": { "default": 1e-8 }
}"#;

#[test]
fn base_fixture_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_scenario(&write_scenario(dir.path(), BASE), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

fn mutation() -> impl Strategy<Value = (String, &'static str)> {
    prop_oneof![
        (1usize..BASE.trim_end().len()).prop_map(|n| (BASE[..n].to_string(), "scenario")),
        "[a-z]{1,6}".prop_map(|n| (BASE.replace(r#""pair": "p""#, &format!(r#""pair": "q{n}""#)), "suites[0].pair")),
        "[a-z]{1,6}".prop_map(|n| (BASE.replace(r#""curve": "c""#, &format!(r#""curve": "q{n}""#)), "suites[0].curve")),
        "[a-z]{1,6}".prop_map(|n| (BASE.replace(r#""eta": "s""#, &format!(r#""eta": "s + {n}(""#)), "profiles[0].eta")),
        (-1e3..=0.0f64).prop_map(|t| (BASE.replace("1e-8", &format!("{t:?}")), "tolerances.default")),
        "[a-z]{1,6}".prop_map(|n| (BASE.replace(r#""theorem3""#, &format!(r#""x{n}""#)), "suites[0].suite")),
        Just((BASE.replace(r#""s_range": [0, 3]"#, r#""s_range": [3, 0]"#), "curves[0].s_range")),
        Just((BASE.replace(r#""u": [-1, 1]"#, r#""u": [1, -1]"#), "surfaces[0].domain")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn malformed_scenarios_exit_with_config_error((text, key) in mutation()) {
        let dir = tempfile::tempdir().unwrap();
        let o = run_scenario(&write_scenario(dir.path(), &text), dir.path(), &[]);
        prop_assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
        prop_assert!(stderr(&o).contains(key), "expected '{}' in: {}", key, stderr(&o));
    }
}
