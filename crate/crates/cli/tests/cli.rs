use hirota_core::asymptotics::{theorem_closed_form, LeadingOptions, RayEvaluator, SqrtBranch};
use hirota_core::interp::UniformGrid;
use hirota_core::scattering::{EquationParams, ScatteringData};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hirota(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hirota")).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, command: &str, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![command, "--config", config.to_str().unwrap(), "--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    hirota(&args)
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn config_text(profile: &str, reflection: Option<&str>, rays: &str, lambda_n: usize) -> String {
    let reflection = reflection.map(|p| format!("\"reflection_input\": \"{p}\",")).unwrap_or_default();
    format!(
        r#"{{
  "schema_version": 1,
  "alpha": 0.0,
  "beta": 1.0,
  "profile": {profile},
  {reflection}
  "lambda_grid": {{"min": -8.0, "max": 8.0, "n": {lambda_n}}},
  "rays": {rays},
  "x_domain": {{"min": -2.0, "max": 2.0, "n": 3}},
  "threads": 2
}}"#
    )
}

/// Writes reflection samples in the layout `scatter` produces.
fn write_reflection(dir: &Path, r1: impl Fn(f64) -> Complex64, r2: impl Fn(f64) -> Complex64) -> PathBuf {
    let path = dir.join("reflection.csv");
    let mut text = String::from("lambda,re_r1,im_r1,re_r2,im_r2,det_defect,symmetry_defect\n");
    for s in UniformGrid::new(-8.0, 8.0, 1601).points() {
        let (a, b) = (r1(s), r2(s));
        text += &format!("{s:.16e},{:.16e},{:.16e},{:.16e},{:.16e},NaN,NaN\n", a.re, a.im, b.re, b.im);
    }
    std::fs::write(&path, text).unwrap();
    path
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let headers = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (headers, rows)
}

fn column(headers: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = headers.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

const ZERO_PROFILE: &str = r#"{"kind": "zero"}"#;

#[test]
fn malformed_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "{ \"schema_version\": 1, ");
    let out = run_in(dir.path(), "scatter", &path, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed config"));

    let text = config_text(ZERO_PROFILE, None, "[]", 33).replace("\"beta\": 1.0,", "\"beta\": 1.0, \"typo\": 1,");
    let path = write_config(dir.path(), &text);
    assert_eq!(run_in(dir.path(), "scatter", &path, &[]).status.code(), Some(1));

    let text = config_text(ZERO_PROFILE, None, r#"[{"xi": 2.0, "t": [10.0]}]"#, 33);
    let path = write_config(dir.path(), &text);
    let out = run_in(dir.path(), "asymptotics", &path, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rays[0].xi"));

    assert_eq!(hirota(&["scatter"]).status.code(), Some(1));
    assert_eq!(hirota(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn zero_profile_scatters_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &config_text(ZERO_PROFILE, None, "[]", 65));
    let out = run_in(dir.path(), "scatter", &path, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (headers, rows) = read_csv(&dir.path().join("scatter.csv"));
    assert_eq!(headers, ["lambda", "re_r1", "im_r1", "re_r2", "im_r2", "det_defect", "symmetry_defect"]);
    assert_eq!(rows.len(), 65);
    for name in ["re_r1", "im_r1", "re_r2", "im_r2"] {
        assert!(column(&headers, &rows, name).iter().all(|v| *v == 0.0));
    }
}

#[test]
fn gaussian_scatter_self_check() {
    let dir = tempfile::tempdir().unwrap();
    let profile = r#"{"kind": "gaussian", "amplitude": 0.5, "width": 1.0, "center": 0.0}"#;
    let path = write_config(dir.path(), &config_text(profile, None, "[]", 161));
    assert_eq!(run_in(dir.path(), "scatter", &path, &["--format", "json"]).status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("scatter.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let det_col = value["columns"].as_array().unwrap().iter().position(|c| c == "det_defect").unwrap();
    let worst = value["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[det_col].as_f64().unwrap())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let profile = r#"{"kind": "sech", "amplitude": 0.4, "width": 1.0, "center": 0.2}"#;
    let rays = r#"[{"xi": -3.0, "t": [10.0, 50.0]}, {"xi": -0.5, "t": [20.0]}]"#;
    let path = write_config(dir.path(), &config_text(profile, None, rays, 401));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        for command in ["scatter", "asymptotics"] {
            let out = run_in(d, command, &path, &["--threads", "3"]);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        }
    }
    for file in ["scatter.csv", "asymptotics.csv"] {
        assert_eq!(std::fs::read(a.join(file)).unwrap(), std::fs::read(b.join(file)).unwrap(), "{file}");
    }
}

#[test]
fn asymptotics_of_zero_reflection() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_reflection(dir.path(), |_| Complex64::new(0.0, 0.0), |_| Complex64::new(0.0, 0.0));
    let rays = r#"[{"xi": -3.0, "t": [10.0, 100.0, 1000.0]}]"#;
    let path = write_config(dir.path(), &config_text(ZERO_PROFILE, Some(input.to_str().unwrap()), rays, 33));
    assert_eq!(run_in(dir.path(), "asymptotics", &path, &[]).status.code(), Some(0));
    let (headers, rows) = read_csv(&dir.path().join("asymptotics.csv"));
    assert_eq!(rows.len(), 3);
    assert!(column(&headers, &rows, "abs_q").iter().all(|v| *v == 0.0));
    // with no reflection the model checks hold trivially
    let out = run_in(dir.path(), "verify", &path, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn real_vartheta_rows_follow_the_modulus_law() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_reflection(
        dir.path(),
        |s| Complex64::new(0.4 * (-s * s).exp(), 0.0),
        |s| Complex64::new(if s < 0.0 { 0.5 * s * s * (-s * s / 2.0).exp() } else { 0.0 }, 0.0),
    );
    let rays = r#"[{"xi": -3.0, "t": [100.0, 1000.0, 10000.0]}]"#;
    let path = write_config(dir.path(), &config_text(ZERO_PROFILE, Some(input.to_str().unwrap()), rays, 33));
    assert_eq!(run_in(dir.path(), "asymptotics", &path, &[]).status.code(), Some(0));
    let (headers, rows) = read_csv(&dir.path().join("asymptotics.csv"));
    let t = column(&headers, &rows, "t");
    let abs_q = column(&headers, &rows, "abs_q");
    let scaled: Vec<f64> = t.iter().zip(&abs_q).map(|(t, q)| t.sqrt() * q).collect();
    assert!(scaled[0] > 0.0);
    for s in &scaled {
        assert!((s - scaled[0]).abs() <= 1e-9 * scaled[0]);
    }
}

#[test]
fn asymptotics_match_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = |s: f64| Complex64::new(0.4, 0.0) * (-s * s).exp() * Complex64::from_polar(1.0, 0.8 * s);
    let r2 = |s: f64| Complex64::new(0.5 * (-s * s / 2.0).exp(), 0.1 * s * (-s * s).exp());
    let input = write_reflection(dir.path(), r1, r2);
    let rays = r#"[{"xi": -2.0, "t": [10.0, 40.0]}, {"xi": -4.5, "t": [15.0, 300.0]}]"#;
    let path = write_config(dir.path(), &config_text(ZERO_PROFILE, Some(input.to_str().unwrap()), rays, 33));
    assert_eq!(run_in(dir.path(), "asymptotics", &path, &[]).status.code(), Some(0));
    let (headers, rows) = read_csv(&dir.path().join("asymptotics.csv"));

    // second path: the closed two-term formula on the same samples
    let grid = UniformGrid::new(-8.0, 8.0, 1601);
    let pts = grid.points();
    let data = ScatteringData::from_samples(
        EquationParams { alpha: 0.0, beta: 1.0 },
        grid,
        pts.iter().map(|&s| r1(s)).collect(),
        pts.iter().map(|&s| r2(s)).collect(),
    )
    .unwrap();
    let (xi, t) = (column(&headers, &rows, "xi"), column(&headers, &rows, "t"));
    let (re, im) = (column(&headers, &rows, "re_q"), column(&headers, &rows, "im_q"));
    assert_eq!(rows.len(), 4);
    for k in 0..rows.len() {
        let ray = RayEvaluator::new(&data, xi[k], LeadingOptions::default()).unwrap();
        let expected = theorem_closed_form(&ray.terms_at(t[k]).unwrap(), SqrtBranch::PlusHalfPi);
        assert!((Complex64::new(re[k], im[k]) - expected).norm() <= 1e-9);
    }
}

/// arg(1 − r1 r2) climbs to 3π/2 between the two stationary points of ξ = −3.
fn winding_violation(s: f64) -> Complex64 {
    1.0 - Complex64::from_polar(1.0, 1.5 * PI * (-(s + 0.5).powi(2)).exp())
}

#[test]
fn winding_violation_is_rejected_per_ray() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_reflection(dir.path(), winding_violation, |_| Complex64::new(1.0, 0.0));
    let rays = r#"[{"xi": -3.0, "t": [10.0]}, {"xi": -300.0, "t": [10.0]}]"#;
    let path = write_config(dir.path(), &config_text(ZERO_PROFILE, Some(input.to_str().unwrap()), rays, 33));
    let out = run_in(dir.path(), "asymptotics", &path, &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("xi = -3") && stderr.contains("winding"), "{stderr}");
    let (headers, rows) = read_csv(&dir.path().join("asymptotics_rejected.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][headers.iter().position(|h| h == "reason").unwrap()], "winding");
    // the valid ray is still evaluated
    let (_, valid) = read_csv(&dir.path().join("asymptotics.csv"));
    assert_eq!(valid.len(), 1);

    let out = run_in(dir.path(), "verify", &path, &[]);
    assert_eq!(out.status.code(), Some(3));
    let (headers, rows) = read_csv(&dir.path().join("verify_report.csv"));
    let name = headers.iter().position(|h| h == "name").unwrap();
    let passed = headers.iter().position(|h| h == "passed").unwrap();
    let winding = rows.iter().find(|r| r[name] == "ray[0].winding").unwrap();
    assert_eq!(winding[passed], "false");
}

#[test]
fn shipped_config_round_trips() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/default.json");
    let config = hirota_cli::RunConfig::load(&path).unwrap();
    let once = config.to_json();
    assert_eq!(hirota_cli::RunConfig::from_json(&once).unwrap().to_json(), once);
}
