//! The subcommands: each reads a validated [`RunConfig`] and writes tables.

use crate::config::{ConfigError, Format, RunConfig};
use crate::output::{Cell, Table};
use hirota_core::asymptotics::{AsymptoticsError, LeadingOptions, RayEvaluator};
use hirota_core::deltafun::{winding_check, DeltaFactor, DeltaOptions};
use hirota_core::interp::UniformGrid;
use hirota_core::modelrh::{jump_product_check, moment_consistency, ode_residual, ModelError, ModelProblem};
use hirota_core::ode::Tolerance;
use hirota_core::phase::{PhaseGeometry, StationaryPoint};
use hirota_core::rhoracle::{oracle_q_with_limit, DeformedOptions, OracleMode, RealLineOptions};
use hirota_core::scattering::{reflection_coefficients, Profile, ScatteringData};
use hirota_core::specfun::Side;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{rejected} ray(s) rejected")]
    RejectedRays { rejected: usize },
    #[error("{failed} verification check(s) failed")]
    Verification { failed: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) | CliError::RejectedRays { .. } | CliError::Io(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Settings shared by every subcommand after flags are merged into the config.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub format: Format,
    pub seed: u64,
}

impl Context {
    pub fn new(config: RunConfig, out_dir: Option<PathBuf>, format: Option<Format>, seed: u64) -> Self {
        let out_dir = out_dir.unwrap_or_else(|| config.output.dir.clone());
        let format = format.unwrap_or(config.output.format);
        Self { config, out_dir, format, seed }
    }

    fn write(&self, table: &Table, stem: &str) -> Result<PathBuf, CliError> {
        Ok(table.write(&self.out_dir, stem, self.format)?)
    }

    fn tolerance(&self) -> Tolerance {
        let tol = self.config.tolerances.ode;
        Tolerance { rtol: tol, atol: tol, ..Tolerance::default() }
    }

    fn profile(&self) -> Result<Profile, CliError> {
        self.config.profile.build().map_err(|e| {
            CliError::Config(ConfigError::Invalid { field: "profile".into(), message: e.to_string() })
        })
    }

    /// Reflection data: loaded from `reflection_input` when set, otherwise computed.
    pub fn scattering(&self) -> Result<ScatteringData, CliError> {
        match &self.config.reflection_input {
            Some(path) => load_reflection(path, &self.config),
            None => {
                let g = self.config.lambda_grid;
                let grid = UniformGrid::new(g.min, g.max, g.n);
                reflection_coefficients(&self.profile()?, grid, self.config.params(), self.tolerance())
                    .map_err(numerical)
            }
        }
    }
}

pub const SCATTER_COLUMNS: [&str; 7] =
    ["lambda", "re_r1", "im_r1", "re_r2", "im_r2", "det_defect", "symmetry_defect"];

fn load_reflection(path: &Path, config: &RunConfig) -> Result<ScatteringData, CliError> {
    let field = || "reflection_input".to_string();
    let bad = |message: String| CliError::Config(ConfigError::Invalid { field: field(), message });
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let index = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| bad(format!("missing column {name}")))
    };
    let cols = [index("lambda")?, index("re_r1")?, index("im_r1")?, index("re_r2")?, index("im_r2")?];
    let (mut lambdas, mut r1, mut r2) = (Vec::new(), Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let mut v = [0.0; 5];
        for (slot, &c) in v.iter_mut().zip(&cols) {
            *slot = record
                .get(c)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(format!("row {}: unreadable number", line + 2)))?;
        }
        lambdas.push(v[0]);
        r1.push(Complex64::new(v[1], v[2]));
        r2.push(Complex64::new(v[3], v[4]));
    }
    let n = lambdas.len();
    if n < 2 {
        return Err(bad("needs at least two rows".into()));
    }
    let grid = UniformGrid::new(lambdas[0], lambdas[n - 1], n);
    for (k, &l) in lambdas.iter().enumerate() {
        if (l - grid.point(k)).abs() > 1e-9 * grid.step.max(1.0) {
            return Err(bad(format!("row {}: lambda grid is not uniform", k + 2)));
        }
    }
    ScatteringData::from_samples(config.params(), grid, r1, r2).map_err(|e| bad(e.to_string()))
}

fn nan_or<T>(v: Option<&Vec<T>>, k: usize) -> f64
where
    T: Copy + Into<f64>,
{
    v.map(|xs| xs[k].into()).unwrap_or(f64::NAN)
}

pub fn scatter_table(data: &ScatteringData) -> Table {
    let mut table = Table::new(&SCATTER_COLUMNS);
    for k in 0..data.grid.n {
        table.push(vec![
            data.grid.point(k).into(),
            data.r1[k].re.into(),
            data.r1[k].im.into(),
            data.r2[k].re.into(),
            data.r2[k].im.into(),
            nan_or(data.det_defect.as_ref(), k).into(),
            nan_or(data.symmetry_defect.as_ref(), k).into(),
        ]);
    }
    table
}

pub fn cmd_scatter(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let data = ctx.scattering()?;
    Ok(vec![ctx.write(&scatter_table(&data), "scatter")?])
}

pub const ASYMPTOTICS_COLUMNS: [&str; 10] = [
    "xi",
    "t",
    "re_q",
    "im_q",
    "abs_q",
    "error_exponent",
    "re_vartheta0",
    "im_vartheta0",
    "re_vartheta1",
    "im_vartheta1",
];

pub const REJECTED_COLUMNS: [&str; 5] = ["xi", "reason", "arg_at_lambda0", "arg_at_lambda1", "message"];

/// Leading-order rows for every valid ray, and a diagnostic row per rejected ray.
pub fn asymptotics_tables(ctx: &Context, data: &ScatteringData) -> (Table, Table) {
    let mut rows = Table::new(&ASYMPTOTICS_COLUMNS);
    let mut rejected = Table::new(&REJECTED_COLUMNS);
    let results: Vec<_> = ctx
        .config
        .rays
        .par_iter()
        .map(|ray| {
            let evaluator = RayEvaluator::new(data, ray.xi, LeadingOptions::default())?;
            ray.t.iter().map(|&t| evaluator.terms_at(t)).collect::<Result<Vec<_>, _>>()
        })
        .collect();
    for (ray, result) in ctx.config.rays.iter().zip(results) {
        match result {
            Ok(terms) => {
                for term in terms {
                    let dd = term.delta_data;
                    rows.push(vec![
                        ray.xi.into(),
                        term.t.into(),
                        term.q_leading.re.into(),
                        term.q_leading.im.into(),
                        term.q_leading.norm().into(),
                        term.error_exponent.into(),
                        dd.vartheta0.re.into(),
                        dd.vartheta0.im.into(),
                        dd.vartheta1.re.into(),
                        dd.vartheta1.im.into(),
                    ]);
                }
            }
            Err(err) => {
                let (reason, a0, a1) = match &err {
                    AsymptoticsError::Winding { im0, im1 } => {
                        ("winding", -2.0 * std::f64::consts::PI * im0, -2.0 * std::f64::consts::PI * im1)
                    }
                    AsymptoticsError::Sector { .. } => ("sector", f64::NAN, f64::NAN),
                    _ => ("numerical", f64::NAN, f64::NAN),
                };
                log::error!("ray xi = {}: rejected ({reason}): {err}", ray.xi);
                eprintln!("ray xi = {}: rejected ({reason}): {err}", ray.xi);
                rejected.push(vec![ray.xi.into(), reason.into(), a0.into(), a1.into(), err.to_string().into()]);
            }
        }
    }
    (rows, rejected)
}

pub fn cmd_asymptotics(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let data = ctx.scattering()?;
    asymptotics_with(ctx, &data)
}

fn asymptotics_with(ctx: &Context, data: &ScatteringData) -> Result<Vec<PathBuf>, CliError> {
    let (rows, rejected) = asymptotics_tables(ctx, data);
    let mut files = vec![ctx.write(&rows, "asymptotics")?];
    if !rejected.rows.is_empty() {
        files.push(ctx.write(&rejected, "asymptotics_rejected")?);
        return Err(CliError::RejectedRays { rejected: rejected.rows.len() });
    }
    Ok(files)
}

pub const ROUND_TRIP_COLUMNS: [&str; 8] =
    ["x", "re_q", "im_q", "re_q0", "im_q0", "abs_error", "nodes", "residual"];

pub const ORACLE_RAY_COLUMNS: [&str; 11] = [
    "xi",
    "t",
    "x",
    "re_q_oracle",
    "im_q_oracle",
    "re_q_leading",
    "im_q_leading",
    "error_exponent",
    "scaled_error",
    "nodes",
    "residual",
];

pub fn oracle_tables(ctx: &Context, data: &ScatteringData) -> Result<(Table, Table), CliError> {
    let config = &ctx.config;
    let limit = config.tolerances.linear;
    let real_line = RealLineOptions { eps_disk: config.eps_disk, ..RealLineOptions::default() };
    // q0 is only meaningful when the reflection data came from the profile
    let profile = match config.reflection_input {
        None => Some(ctx.profile()?),
        Some(_) => None,
    };
    let xs = config.x_domain.points();
    let samples = xs
        .par_iter()
        .map(|&x| oracle_q_with_limit(data, x, 0.0, &OracleMode::Undeformed(real_line), limit))
        .collect::<Result<Vec<_>, _>>()
        .map_err(numerical)?;
    let mut round = Table::new(&ROUND_TRIP_COLUMNS);
    for s in samples {
        let q0 = profile.as_ref().map(|p| p.value(s.x)).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        round.push(vec![
            s.x.into(),
            s.q.re.into(),
            s.q.im.into(),
            q0.re.into(),
            q0.im.into(),
            (s.q - q0).norm().into(),
            s.nodes.into(),
            s.residual.into(),
        ]);
    }
    let deformed = DeformedOptions {
        decay_floor: config.tolerances.quad,
        ode: ctx.tolerance(),
        ..DeformedOptions::default()
    };
    let mut rays = Table::new(&ORACLE_RAY_COLUMNS);
    let mut rejected = 0;
    for ray in &config.rays {
        let evaluator = match RayEvaluator::new(data, ray.xi, LeadingOptions::default()) {
            Ok(e) => e,
            Err(err) => {
                eprintln!("ray xi = {}: rejected: {err}", ray.xi);
                rejected += 1;
                continue;
            }
        };
        for &t in &ray.t {
            let x = ray.xi * t;
            let oracle = oracle_q_with_limit(data, x, t, &OracleMode::Deformed(deformed), limit)
                .map_err(numerical)?;
            let terms = evaluator.terms_at(t).map_err(numerical)?;
            let scaled = (oracle.q - terms.q_leading).norm() * t.powf(terms.error_exponent);
            rays.push(vec![
                ray.xi.into(),
                t.into(),
                x.into(),
                oracle.q.re.into(),
                oracle.q.im.into(),
                terms.q_leading.re.into(),
                terms.q_leading.im.into(),
                terms.error_exponent.into(),
                scaled.into(),
                oracle.nodes.into(),
                oracle.residual.into(),
            ]);
        }
    }
    if rejected > 0 {
        ctx.write(&round, "oracle_roundtrip")?;
        ctx.write(&rays, "oracle_rays")?;
        return Err(CliError::RejectedRays { rejected });
    }
    Ok((round, rays))
}

pub fn cmd_oracle(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let data = ctx.scattering()?;
    oracle_with(ctx, &data)
}

fn oracle_with(ctx: &Context, data: &ScatteringData) -> Result<Vec<PathBuf>, CliError> {
    let (round, rays) = oracle_tables(ctx, data)?;
    Ok(vec![ctx.write(&round, "oracle_roundtrip")?, ctx.write(&rays, "oracle_rays")?])
}

/// One named invariant of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value <= threshold, value, threshold }
    }
}

pub const VERIFY_COLUMNS: [&str; 4] = ["name", "passed", "value", "threshold"];

fn model_checks(name: &str, vartheta: Complex64, r1: Complex64, r2: Complex64, which: StationaryPoint) -> Vec<Check> {
    let problem = match ModelProblem::new(vartheta, r1, r2, which) {
        Ok(p) => p,
        Err(ModelError::Trivial) => {
            // vanishing data: the model solution is the identity
            return ["ode_residual", "jump_product", "moment_consistency"]
                .iter()
                .map(|c| Check::at_most(format!("{name}.{c}"), 0.0, 0.0))
                .collect();
        }
        Err(e) => {
            log::error!("{name}: {e}");
            return vec![Check::at_most(format!("{name}.construction"), f64::INFINITY, 0.0)];
        }
    };
    let ode = [Complex64::new(1.0, 1.0), Complex64::new(-0.5, 0.8), Complex64::new(0.3, -1.2)]
        .iter()
        .map(|&z| ode_residual(&problem, z, 0.01).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    vec![
        Check::at_most(format!("{name}.ode_residual"), ode, 1e-8),
        Check::at_most(format!("{name}.jump_product"), jump_product_check(&problem), 1e-9),
        Check::at_most(
            format!("{name}.moment_consistency"),
            moment_consistency(&problem).unwrap_or(f64::INFINITY),
            1e-12,
        ),
    ]
}

fn ray_checks(data: &ScatteringData, xi: f64, k: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let prefix = format!("ray[{k}]");
    let geometry = match PhaseGeometry::new(data.params, xi) {
        Ok(g) => g,
        Err(_) => return vec![Check::at_most(format!("{prefix}.sector"), f64::INFINITY, 0.0)],
    };
    let report = match winding_check(data, &geometry) {
        Ok(r) => r,
        Err(e) => {
            log::error!("{prefix}: {e}");
            return vec![Check::at_most(format!("{prefix}.winding"), f64::INFINITY, 0.5)];
        }
    };
    let worst_im = report.im_vartheta0.abs().max(report.im_vartheta1.abs());
    let mut checks = vec![Check { name: format!("{prefix}.winding"), passed: report.ok, value: worst_im, threshold: 0.5 }];
    if !report.ok {
        return checks;
    }
    let delta = match DeltaFactor::new(data, &geometry, DeltaOptions::default()) {
        Ok(d) => d,
        Err(e) => {
            log::error!("{prefix}: {e}");
            checks.push(Check::at_most(format!("{prefix}.delta"), f64::INFINITY, 0.0));
            return checks;
        }
    };
    let (l0, l1) = (geometry.lambda0, geometry.lambda1);
    let mut jump: f64 = 0.0;
    for j in 1..=20 {
        let s = l0 + (l1 - l0) * j as f64 / 21.0;
        let ratio = delta
            .delta(s.into(), Some(Side::Plus))
            .and_then(|p| delta.delta(s.into(), Some(Side::Minus)).map(|m| p / m));
        jump = jump.max(ratio.map(|r| (r - delta.jump(s)).norm()).unwrap_or(f64::INFINITY));
    }
    checks.push(Check::at_most(format!("{prefix}.delta_jump"), jump, 1e-6));
    let mut agreement: f64 = 0.0;
    let span = l1 - l0;
    for _ in 0..50 {
        let re = rng.random_range((l0 - span)..(l1 + span));
        let mut im: f64 = rng.random_range(-span..span);
        if im.abs() < 1e-3 {
            im = 1e-3f64.copysign(im);
        }
        let z = Complex64::new(re, im);
        let pair = delta
            .delta_via(z, StationaryPoint::Left, None)
            .and_then(|a| delta.delta_via(z, StationaryPoint::Right, None).map(|b| (a - b).norm()));
        agreement = agreement.max(pair.unwrap_or(f64::INFINITY));
    }
    checks.push(Check::at_most(format!("{prefix}.delta_representations"), agreement, 1e-8));
    for (which, point, vartheta, tag) in [
        (StationaryPoint::Left, l0, delta.vartheta0, "model_lambda0"),
        (StationaryPoint::Right, l1, delta.vartheta1, "model_lambda1"),
    ] {
        checks.extend(model_checks(&format!("{prefix}.{tag}"), vartheta, data.r1_at(point), data.r2_at(point), which));
    }
    checks
}

pub fn verify_checks(ctx: &Context, data: &ScatteringData) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    if let Some(det) = data.max_det_defect() {
        checks.push(Check::at_most("scattering.det_defect", det, 1e-8));
    }
    if let Some(sym) = data.max_symmetry_defect() {
        checks.push(Check::at_most("scattering.symmetry_defect", sym, 1e-8));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for (k, ray) in ctx.config.rays.iter().enumerate() {
        checks.extend(ray_checks(data, ray.xi, k, &mut rng));
    }
    if ctx.config.reflection_input.is_none() {
        let profile = ctx.profile()?;
        let threshold = match ctx.config.profile.amplitude() {
            Some(a) if a <= 0.5 => 1e-4,
            _ => 1e-3,
        };
        let real_line = RealLineOptions { eps_disk: ctx.config.eps_disk, ..RealLineOptions::default() };
        let worst = ctx
            .config
            .x_domain
            .points()
            .par_iter()
            .map(|&x| {
                oracle_q_with_limit(data, x, 0.0, &OracleMode::Undeformed(real_line), ctx.config.tolerances.linear)
                    .map(|s| (s.q - profile.value(x)).norm())
                    .unwrap_or(f64::INFINITY)
            })
            .reduce(|| 0.0, f64::max);
        checks.push(Check::at_most("oracle.round_trip", worst, threshold));
    }
    Ok(checks)
}

pub fn verify_table(checks: &[Check]) -> Table {
    let mut table = Table::new(&VERIFY_COLUMNS);
    for c in checks {
        table.push(vec![c.name.clone().into(), c.passed.into(), c.value.into(), Cell::Float(c.threshold)]);
    }
    table
}

pub fn cmd_verify(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let data = ctx.scattering()?;
    verify_with(ctx, &data)
}

fn verify_with(ctx: &Context, data: &ScatteringData) -> Result<Vec<PathBuf>, CliError> {
    let checks = verify_checks(ctx, data)?;
    let file = ctx.write(&verify_table(&checks), "verify_report")?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in checks.iter().filter(|c| !c.passed) {
        eprintln!("FAILED {}: {:e} (threshold {:e})", c.name, c.value, c.threshold);
    }
    if failed > 0 {
        return Err(CliError::Verification { failed });
    }
    Ok(vec![file])
}

/// scatter, asymptotics and oracle on one shared scattering computation.
pub fn cmd_sweep(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let data = ctx.scattering()?;
    let mut files = vec![ctx.write(&scatter_table(&data), "scatter")?];
    let asymptotics = asymptotics_with(ctx, &data);
    let oracle = oracle_with(ctx, &data);
    files.extend(asymptotics?);
    files.extend(oracle?);
    Ok(files)
}
