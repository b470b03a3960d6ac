//! Initial data q0(x): closed-form bumps or tabulated samples.

use super::ScatteringError;
use crate::interp::interpolate_nonuniform;
use num_complex::Complex64;
use std::path::Path;

/// Tail mass ∫_{|x|>X} |q0| that the truncation must stay below.
pub const TAIL_MASS_TARGET: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// amplitude · exp(−((x − center)/width)²)
    Gaussian,
    /// amplitude · sech((x − center)/width)
    Sech,
    /// Cubic interpolation of samples, zero outside their range.
    Table { xs: Vec<f64>, values: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub kind: ProfileKind,
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
    halfwidth: f64,
}

impl Profile {
    pub fn gaussian(amplitude: f64, width: f64, center: f64) -> Result<Self, ScatteringError> {
        Self::closed_form(ProfileKind::Gaussian, amplitude, width, center)
    }

    pub fn sech(amplitude: f64, width: f64, center: f64) -> Result<Self, ScatteringError> {
        Self::closed_form(ProfileKind::Sech, amplitude, width, center)
    }

    /// The zero potential.
    pub fn zero() -> Self {
        Self { kind: ProfileKind::Gaussian, amplitude: 0.0, width: 1.0, center: 0.0, halfwidth: 1.0 }
    }

    fn closed_form(
        kind: ProfileKind,
        amplitude: f64,
        width: f64,
        center: f64,
    ) -> Result<Self, ScatteringError> {
        if !(width > 0.0) || !amplitude.is_finite() || !center.is_finite() {
            return Err(ScatteringError::InvalidProfile(format!(
                "need finite amplitude/center and width > 0, got amplitude {amplitude}, width {width}, center {center}"
            )));
        }
        let mut profile = Self { kind, amplitude, width, center, halfwidth: 0.0 };
        profile.halfwidth = profile.default_halfwidth();
        Ok(profile)
    }

    pub fn from_table(xs: Vec<f64>, values: Vec<Complex64>) -> Result<Self, ScatteringError> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(ScatteringError::InvalidProfile(
                "table needs at least two (x, q0) rows".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ScatteringError::InvalidProfile("table x must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(ScatteringError::InvalidProfile("table contains non-finite q0".into()));
        }
        let halfwidth = xs[0].abs().max(xs[xs.len() - 1].abs());
        let amplitude = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self {
            kind: ProfileKind::Table { xs, values },
            amplitude,
            width: halfwidth,
            center: 0.0,
            halfwidth,
        })
    }

    /// Reads whitespace-separated `x Re(q0) [Im(q0)]` rows; `#` starts a comment.
    pub fn load_table(path: &Path) -> Result<Self, ScatteringError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ScatteringError::InvalidProfile(format!("cannot read {}: {e}", path.display()))
        })?;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
            let fields = fields.map_err(|e| {
                ScatteringError::InvalidProfile(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
            match fields.as_slice() {
                [x, re] => {
                    xs.push(*x);
                    values.push(Complex64::new(*re, 0.0));
                }
                [x, re, im] => {
                    xs.push(*x);
                    values.push(Complex64::new(*re, *im));
                }
                _ => {
                    return Err(ScatteringError::InvalidProfile(format!(
                        "{}:{}: expected 2 or 3 columns",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Self::from_table(xs, values)
    }

    /// q0(x).
    pub fn value(&self, x: f64) -> Complex64 {
        match &self.kind {
            ProfileKind::Gaussian => {
                let s = (x - self.center) / self.width;
                Complex64::new(self.amplitude * (-s * s).exp(), 0.0)
            }
            ProfileKind::Sech => {
                let s = (x - self.center) / self.width;
                Complex64::new(self.amplitude / s.cosh(), 0.0)
            }
            ProfileKind::Table { xs, values } => {
                interpolate_nonuniform(xs, values, x).unwrap_or(Complex64::new(0.0, 0.0))
            }
        }
    }

    /// Truncation half-width X: integration runs over [−X, X].
    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    /// Overrides the truncation half-width.
    pub fn with_halfwidth(mut self, halfwidth: f64) -> Result<Self, ScatteringError> {
        if !(halfwidth > 0.0) {
            return Err(ScatteringError::InvalidProfile(format!(
                "domain half-width must be positive, got {halfwidth}"
            )));
        }
        self.halfwidth = halfwidth;
        Ok(self)
    }

    /// Upper bound for ∫_{|x|>X} |q0| from the closed-form envelope.
    pub fn tail_bound(&self, halfwidth: f64) -> f64 {
        let a = self.amplitude.abs();
        let w = self.width;
        // distance from the bump centre to the nearer truncation point
        let d = (halfwidth - self.center.abs()).max(0.0) / w;
        match self.kind {
            ProfileKind::Gaussian => {
                if d < 1.0 {
                    a * w * std::f64::consts::PI.sqrt()
                } else {
                    a * w * (-d * d).exp() / d
                }
            }
            ProfileKind::Sech => 4.0 * a * w * (-d).exp(),
            ProfileKind::Table { .. } => 0.0,
        }
    }

    fn default_halfwidth(&self) -> f64 {
        let mut x = 20.0 * self.width;
        while self.tail_bound(x) >= TAIL_MASS_TARGET {
            x *= 1.25;
        }
        x
    }

    /// ∫_{−X}^{X} |q0| by composite Gauss–Legendre, for the decay check.
    pub fn l1_mass(&self, halfwidth: f64) -> f64 {
        let panels = (8.0 * halfwidth / self.width.min(halfwidth)).ceil().max(16.0) as usize;
        let breaks: Vec<f64> = (0..=panels).map(|k| k as f64 / panels as f64).collect();
        crate::quad::interval_nodes(-halfwidth, halfwidth, &breaks)
            .into_iter()
            .map(|(x, w)| w * self.value(x).norm())
            .sum()
    }
}
