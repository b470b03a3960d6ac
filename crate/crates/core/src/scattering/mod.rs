//! Direct scattering: Jost solutions of the x-part of the Lax pair, the
//! scattering matrix and the reflection coefficients r1 = s21/s11,
//! r2 = s12/s22 on a real λ-grid.
//!
//! The Jost matrices are integrated in the interaction picture
//! ν = e^{iλxσ3} μ e^{−iλxσ3}, which satisfies
//! ν_x = [[0, u e^{2iλx}], [v e^{−2iλx}, 0]] ν with u = q0(x), v = q0(−x).
//! ν and μ coincide at the matching point x = 0, and ν is constant wherever
//! the potential vanishes, so the free oscillation costs no steps.

mod profile;

pub use profile::{Profile, ProfileKind, TAIL_MASS_TARGET};

use crate::interp::UniformGrid;
use crate::ode::{self, OdeError, Tolerance};
use crate::Mat2;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatteringError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("Jost integration failed at lambda = {lambda}: {source}")]
    Integration { lambda: Complex64, source: OdeError },
    #[error("spectral singularity at lambda = {lambda} (|s11| = {s11_abs:e}, |s22| = {s22_abs:e}): outside the solitonless sector")]
    SpectralSingularity { lambda: f64, s11_abs: f64, s22_abs: f64 },
    #[error("invalid scattering data: {0}")]
    InvalidData(String),
}

/// Denominator floor below which |s11| or |s22| signals a spectral singularity.
pub const DENOMINATOR_FLOOR: f64 = 1e-10;

/// Equation coefficients of the dispersive (α) and third-order (β) terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationParams {
    pub alpha: f64,
    pub beta: f64,
}

/// Normalized Jost matrices at the matching point x = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct JostSolution {
    pub lambda: f64,
    /// μ− transported from x = −X (where it equals I) to x = 0.
    pub mu_minus: Mat2,
    /// μ+ transported from x = +X (where it equals I) to x = 0.
    pub mu_plus: Mat2,
    /// max |det μ± − 1| over every accepted step of both integrations.
    pub det_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub lambda: f64,
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
}

impl ScatteringMatrix {
    pub fn det_defect(&self) -> f64 {
        (self.s11 * self.s22 - self.s12 * self.s21 - 1.0).norm()
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.s12 - self.s21).norm()
    }
}

fn to_state(m: &Mat2) -> [Complex64; 4] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

fn to_mat(y: &[Complex64; 4]) -> Mat2 {
    Mat2::new(y[0], y[1], y[2], y[3])
}

/// Transports ν from `x_start` (where ν = I) to x = 0 for a complex spectral
/// parameter; returns ν(0) and the largest |det ν − 1| seen on the way.
pub fn transport_to_origin(
    profile: &Profile,
    lambda: Complex64,
    x_start: f64,
    tol: Tolerance,
) -> Result<(Mat2, f64), ScatteringError> {
    let i2l = 2.0 * Complex64::i() * lambda;
    let rhs = |x: f64, y: &[Complex64; 4]| {
        let up = profile.value(x) * (i2l * x).exp();
        let down = profile.value(-x) * (-i2l * x).exp();
        [up * y[2], up * y[3], down * y[0], down * y[1]]
    };
    let mut defect: f64 = 0.0;
    let (y, _) = ode::integrate(rhs, x_start, 0.0, to_state(&Mat2::identity()), tol, |_, y| {
        defect = defect.max((y[0] * y[3] - y[1] * y[2] - 1.0).norm());
    })
    .map_err(|source| ScatteringError::Integration { lambda, source })?;
    Ok((to_mat(&y), defect))
}

pub fn jost_solutions(
    profile: &Profile,
    lambda: f64,
    tol: Tolerance,
) -> Result<JostSolution, ScatteringError> {
    let x_max = profile.halfwidth();
    let (mu_minus, d_minus) = transport_to_origin(profile, lambda.into(), -x_max, tol)?;
    let (mu_plus, d_plus) = transport_to_origin(profile, lambda.into(), x_max, tol)?;
    Ok(JostSolution { lambda, mu_minus, mu_plus, det_defect: d_minus.max(d_plus) })
}

/// S = μ+(0)⁻¹ μ−(0), using det μ+ = 1 for the inverse.
fn matching(mu_minus: &Mat2, mu_plus: &Mat2) -> Mat2 {
    let adj = Mat2::new(mu_plus[(1, 1)], -mu_plus[(0, 1)], -mu_plus[(1, 0)], mu_plus[(0, 0)]);
    let det = mu_plus[(0, 0)] * mu_plus[(1, 1)] - mu_plus[(0, 1)] * mu_plus[(1, 0)];
    adj * mu_minus / det
}

pub fn scattering_matrix(
    profile: &Profile,
    lambda: f64,
    tol: Tolerance,
) -> Result<ScatteringMatrix, ScatteringError> {
    let jost = jost_solutions(profile, lambda, tol)?;
    let s = matching(&jost.mu_minus, &jost.mu_plus);
    Ok(ScatteringMatrix { lambda, s11: s[(0, 0)], s12: s[(0, 1)], s21: s[(1, 0)], s22: s[(1, 1)] })
}

/// Scattering matrix of the truncated potential at a complex spectral
/// parameter. On [−X, X] every entry is entire in λ, so this is the analytic
/// continuation the deformed contour needs.
pub fn scattering_matrix_complex(
    profile: &Profile,
    lambda: Complex64,
    tol: Tolerance,
) -> Result<Mat2, ScatteringError> {
    let x_max = profile.halfwidth();
    let (mu_minus, _) = transport_to_origin(profile, lambda, -x_max, tol)?;
    let (mu_plus, _) = transport_to_origin(profile, lambda, x_max, tol)?;
    Ok(matching(&mu_minus, &mu_plus))
}

/// Reflection data sampled on a uniform real grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringData {
    pub params: EquationParams,
    pub grid: UniformGrid,
    pub r1: Vec<Complex64>,
    pub r2: Vec<Complex64>,
    /// s11, s22 when the data came from a profile.
    pub s11: Option<Vec<Complex64>>,
    pub s22: Option<Vec<Complex64>>,
    /// |det S − 1| per grid point when available.
    pub det_defect: Option<Vec<f64>>,
    /// |s12 − s21| per grid point when available.
    pub symmetry_defect: Option<Vec<f64>>,
    /// The potential itself, kept for analytic continuation off the axis.
    pub profile: Option<Profile>,
}

impl ScatteringData {
    /// Wraps externally supplied reflection samples.
    pub fn from_samples(
        params: EquationParams,
        grid: UniformGrid,
        r1: Vec<Complex64>,
        r2: Vec<Complex64>,
    ) -> Result<Self, ScatteringError> {
        if r1.len() != grid.n || r2.len() != grid.n {
            return Err(ScatteringError::InvalidData(format!(
                "expected {} samples, got r1: {}, r2: {}",
                grid.n,
                r1.len(),
                r2.len()
            )));
        }
        if r1.iter().chain(r2.iter()).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(ScatteringError::InvalidData("non-finite reflection sample".into()));
        }
        Ok(Self {
            params,
            grid,
            r1,
            r2,
            s11: None,
            s22: None,
            det_defect: None,
            symmetry_defect: None,
            profile: None,
        })
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.grid.points()
    }

    /// r1 at a real λ; zero outside the sampled range (decayed tails).
    pub fn r1_at(&self, lambda: f64) -> Complex64 {
        self.interpolate(&self.r1, lambda)
    }

    /// r2 at a real λ; zero outside the sampled range (decayed tails).
    pub fn r2_at(&self, lambda: f64) -> Complex64 {
        self.interpolate(&self.r2, lambda)
    }

    /// 1 − r1 r2 at a real λ.
    pub fn one_minus_r1r2(&self, lambda: f64) -> Complex64 {
        1.0 - self.r1_at(lambda) * self.r2_at(lambda)
    }

    fn interpolate(&self, values: &[Complex64], lambda: f64) -> Complex64 {
        self.grid.interpolate(values, lambda).unwrap_or_else(|| {
            log::debug!("lambda = {lambda} outside the reflection grid; using r = 0");
            Complex64::new(0.0, 0.0)
        })
    }

    /// max |(1 − r1 r2) s11 s22 − 1| over the grid, when s11, s22 are known.
    pub fn product_defect(&self) -> Option<f64> {
        let (s11, s22) = (self.s11.as_ref()?, self.s22.as_ref()?);
        Some(
            (0..self.grid.n)
                .map(|k| ((1.0 - self.r1[k] * self.r2[k]) * s11[k] * s22[k] - 1.0).norm())
                .fold(0.0, f64::max),
        )
    }

    pub fn max_det_defect(&self) -> Option<f64> {
        self.det_defect.as_ref().map(|v| v.iter().copied().fold(0.0, f64::max))
    }

    pub fn max_symmetry_defect(&self) -> Option<f64> {
        self.symmetry_defect.as_ref().map(|v| v.iter().copied().fold(0.0, f64::max))
    }
}

/// Samples r1, r2 on exactly the given grid.
pub fn reflection_coefficients(
    profile: &Profile,
    grid: UniformGrid,
    params: EquationParams,
    tol: Tolerance,
) -> Result<ScatteringData, ScatteringError> {
    let matrices: Vec<Result<ScatteringMatrix, ScatteringError>> = grid
        .points()
        .into_par_iter()
        .map(|lambda| scattering_matrix(profile, lambda, tol))
        .collect();
    let n = grid.n;
    let mut data = ScatteringData {
        params,
        grid,
        r1: Vec::with_capacity(n),
        r2: Vec::with_capacity(n),
        s11: Some(Vec::with_capacity(n)),
        s22: Some(Vec::with_capacity(n)),
        det_defect: Some(Vec::with_capacity(n)),
        symmetry_defect: Some(Vec::with_capacity(n)),
        profile: Some(profile.clone()),
    };
    for entry in matrices {
        let s = entry?;
        if s.s11.norm() < DENOMINATOR_FLOOR || s.s22.norm() < DENOMINATOR_FLOOR {
            return Err(ScatteringError::SpectralSingularity {
                lambda: s.lambda,
                s11_abs: s.s11.norm(),
                s22_abs: s.s22.norm(),
            });
        }
        data.r1.push(s.s21 / s.s11);
        data.r2.push(s.s12 / s.s22);
        data.s11.as_mut().unwrap().push(s.s11);
        data.s22.as_mut().unwrap().push(s.s22);
        data.det_defect.as_mut().unwrap().push(s.det_defect());
        data.symmetry_defect.as_mut().unwrap().push(s.symmetry_defect());
    }
    Ok(data)
}

/// Reflection magnitude that the grid ends must reach.
pub const GRID_END_TARGET: f64 = 1e-8;

/// Like [`reflection_coefficients`], but widens the grid at constant spacing
/// until |r1|, |r2| < 1e-8 at both ends.
pub fn reflection_coefficients_widened(
    profile: &Profile,
    grid: UniformGrid,
    params: EquationParams,
    tol: Tolerance,
) -> Result<ScatteringData, ScatteringError> {
    let mut grid = grid;
    for _ in 0..12 {
        let data = reflection_coefficients(profile, grid, params, tol)?;
        let ends = [0, grid.n - 1];
        let decayed = ends
            .iter()
            .all(|&k| data.r1[k].norm() < GRID_END_TARGET && data.r2[k].norm() < GRID_END_TARGET);
        if decayed {
            return Ok(data);
        }
        let extra = (grid.n / 8).max(2);
        grid = UniformGrid {
            min: grid.min - grid.step * extra as f64,
            step: grid.step,
            n: grid.n + 2 * extra,
        };
        log::info!("widening reflection grid to [{}, {}]", grid.min, grid.max());
    }
    Err(ScatteringError::InvalidData(
        "reflection coefficients do not decay below 1e-8 within the widening budget".into(),
    ))
}
