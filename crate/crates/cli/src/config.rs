//! JSON run configuration.

use hirota_core::scattering::{EquationParams, Profile, ScatteringError};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileSpec {
    Gaussian { amplitude: f64, width: f64, center: f64 },
    Sech { amplitude: f64, width: f64, center: f64 },
    Zero,
    /// Two-column (x, q) or three-column (x, re q, im q) whitespace table.
    Table { path: PathBuf },
}

impl ProfileSpec {
    pub fn build(&self) -> Result<Profile, ScatteringError> {
        match self {
            Self::Gaussian { amplitude, width, center } => Profile::gaussian(*amplitude, *width, *center),
            Self::Sech { amplitude, width, center } => Profile::sech(*amplitude, *width, *center),
            Self::Zero => Ok(Profile::zero()),
            Self::Table { path } => Profile::load_table(path),
        }
    }

    pub fn amplitude(&self) -> Option<f64> {
        match self {
            Self::Gaussian { amplitude, .. } | Self::Sech { amplitude, .. } => Some(amplitude.abs()),
            Self::Zero => Some(0.0),
            Self::Table { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaySpec {
    pub xi: f64,
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// rtol = atol of the Jost integrations.
    pub ode: f64,
    /// |e^{±2iθ}| at which the deformed rays are truncated.
    pub quad: f64,
    /// Largest accepted residual of the collocation system.
    pub linear: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { ode: 1e-10, quad: 1e-16, linear: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub format: Format,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), format: Format::Csv }
    }
}

fn default_eps_disk() -> f64 {
    0.1
}

fn default_threads() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub alpha: f64,
    pub beta: f64,
    pub profile: ProfileSpec,
    /// Reflection data written by `scatter` (CSV) used instead of computing it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflection_input: Option<PathBuf>,
    pub lambda_grid: GridSpec,
    #[serde(default)]
    pub rays: Vec<RaySpec>,
    pub x_domain: GridSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_eps_disk")]
    pub eps_disk: f64,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let mut config = Self::from_json(&text)?;
        // relative data paths are taken relative to the config file
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(input) = &config.reflection_input {
            if input.is_relative() {
                config.reflection_input = Some(base.join(input));
            }
        }
        if let ProfileSpec::Table { path: table } = &config.profile {
            if table.is_relative() {
                config.profile = ProfileSpec::Table { path: base.join(table) };
            }
        }
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn params(&self) -> EquationParams {
        EquationParams { alpha: self.alpha, beta: self.beta }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if !self.alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(invalid("beta", "must be positive and finite"));
        }
        match &self.profile {
            ProfileSpec::Gaussian { amplitude, width, center } | ProfileSpec::Sech { amplitude, width, center } => {
                if !amplitude.is_finite() {
                    return Err(invalid("profile.amplitude", "must be finite"));
                }
                if !(width.is_finite() && *width > 0.0) {
                    return Err(invalid("profile.width", "must be positive"));
                }
                if !center.is_finite() {
                    return Err(invalid("profile.center", "must be finite"));
                }
            }
            ProfileSpec::Zero | ProfileSpec::Table { .. } => {}
        }
        check_grid("lambda_grid", &self.lambda_grid)?;
        check_grid("x_domain", &self.x_domain)?;
        for (k, ray) in self.rays.iter().enumerate() {
            let disc = self.alpha * self.alpha - 3.0 * self.beta * ray.xi;
            if !(ray.xi.is_finite() && disc > 0.0) {
                return Err(invalid(
                    format!("rays[{k}].xi"),
                    format!("alpha^2 - 3 beta xi = {disc} must be positive"),
                ));
            }
            if ray.t.is_empty() {
                return Err(invalid(format!("rays[{k}].t"), "needs at least one time"));
            }
            for (j, t) in ray.t.iter().enumerate() {
                if !(t.is_finite() && *t > 0.0) {
                    return Err(invalid(format!("rays[{k}].t[{j}]"), "must be positive"));
                }
            }
        }
        let tol = &self.tolerances;
        for (name, value) in [("ode", tol.ode), ("quad", tol.quad), ("linear", tol.linear)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(invalid(format!("tolerances.{name}"), "must be positive"));
            }
        }
        if !(self.eps_disk > 0.0 && self.eps_disk < 0.5) {
            return Err(invalid("eps_disk", "must lie in (0, 0.5)"));
        }
        if self.threads == 0 {
            return Err(invalid("threads", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_grid(field: &str, grid: &GridSpec) -> Result<(), ConfigError> {
    if grid.n < 2 {
        return Err(invalid(format!("{field}.n"), "must be at least 2"));
    }
    if !(grid.min.is_finite() && grid.max.is_finite() && grid.max > grid.min) {
        return Err(invalid(format!("{field}.max"), "must exceed min"));
    }
    Ok(())
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|k| self.min + step * k as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "schema_version": 1,
        "alpha": 0.0,
        "beta": 1.0,
        "profile": {"kind": "gaussian", "amplitude": 0.5, "width": 1.0, "center": 0.0},
        "lambda_grid": {"min": -8.0, "max": 8.0, "n": 201},
        "rays": [{"xi": -3.0, "t": [10.0, 20.0]}],
        "x_domain": {"min": -5.0, "max": 5.0, "n": 11}
    }"#;

    #[test]
    fn defaults_fill_in() {
        let config = RunConfig::from_json(EXAMPLE).unwrap();
        assert_eq!(config.tolerances, Tolerances::default());
        assert_eq!(config.threads, 1);
        assert_eq!(config.output.format, Format::Csv);
    }

    #[test]
    fn serialization_is_idempotent() {
        let once = RunConfig::from_json(EXAMPLE).unwrap().to_json();
        let twice = RunConfig::from_json(&once).unwrap().to_json();
        assert_eq!(once, twice);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = EXAMPLE.replace("\"beta\": 1.0,", "\"beta\": 1.0, \"gamma\": 2.0,");
        assert!(matches!(RunConfig::from_json(&text), Err(ConfigError::Parse(_))));
        let text = EXAMPLE.replace("\"center\": 0.0}", "\"center\": 0.0, \"skew\": 1}");
        assert!(matches!(RunConfig::from_json(&text), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn field_paths_in_errors() {
        let text = EXAMPLE.replace("\"xi\": -3.0", "\"xi\": 3.0");
        let err = RunConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.starts_with("rays[0].xi"), "{err}");
        let text = EXAMPLE.replace("\"n\": 11", "\"n\": 1");
        let err = RunConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.starts_with("x_domain.n"), "{err}");
        let text = EXAMPLE.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(RunConfig::from_json(&text).unwrap_err().to_string().starts_with("schema_version"));
    }
}
