//! Parabolic-cylinder solution of the constant-jump model problem at a
//! stationary point, and checks of its defining properties.
//!
//! Near λ0 the model solution M is analytic off ℝ, has the jump
//! M₊ = M₋ [[1 − r1 r2, −r2], [r1, 1]] across ℝ and behaves like
//! e^{iλ̃²σ3/4}(−λ̃)^{−iϑσ3} at infinity; near λ1 the normalization is
//! e^{−iλ̃²σ3/4}λ̃^{iϑσ3}. The diagonal entries are Weber functions and the
//! off-diagonal ones follow from the first-order system
//! M′ = −[[∓iλ̃/2, Ψ], [Φ, ±iλ̃/2]] M (upper signs at λ0).

use crate::asymptotics::{model_m1, model_m1_21, AsymptoticsError};
use crate::phase::StationaryPoint;
use crate::specfun::{
    pcf_d_at_zero, pcf_d_prime_at_zero, pcf_d_with_derivative, reciprocal_cgamma, Side,
    SpecFunError,
};
use crate::Mat2;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("1 - r1 r2 = {product} differs from exp(-2 pi vartheta) = {expected} by {defect:e}")]
    InconsistentData { product: Complex64, expected: Complex64, defect: f64 },
    #[error("lambda_tilde = {0} is real; give a side")]
    OnAxis(Complex64),
    #[error("r1 and r2 both vanish at a point with vartheta = 0: no model problem to solve")]
    Trivial,
    #[error(transparent)]
    SpecialFunction(#[from] SpecFunError),
    #[error(transparent)]
    Moment(#[from] AsymptoticsError),
}

/// Largest accepted |1 − r1 r2 − e^{−2πϑ}|.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-10;
/// Half-width of the symmetric ϑ-stencil used for the triangular limit.
const TRIANGULAR_STEP: f64 = 1e-5;

/// Ψ and Φ, the off-diagonal coefficients of the model system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiPhi {
    pub psi: Complex64,
    pub phi: Complex64,
    /// One of Ψ, Φ vanishes (ϑ = 0).
    pub degenerate: bool,
}

/// The model problem at one stationary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelProblem {
    pub vartheta: Complex64,
    pub r1_at: Complex64,
    pub r2_at: Complex64,
    pub orientation: StationaryPoint,
    pub psi: Complex64,
    pub phi: Complex64,
}

/// Angles (in units where e^{i·angle} multiplies λ̃) and prefactor
/// exponents of the Weber representations in one half-plane.
struct HalfPlane {
    arg11: f64,
    arg22: f64,
    pre11: Complex64,
    pre22: Complex64,
    nu11: Complex64,
    nu22: Complex64,
}

impl ModelProblem {
    /// Validates 1 − r1 r2 = e^{−2πϑ} and fills in Ψ, Φ.
    pub fn new(
        vartheta: Complex64,
        r1_at: Complex64,
        r2_at: Complex64,
        orientation: StationaryPoint,
    ) -> Result<Self, ModelError> {
        let product = 1.0 - r1_at * r2_at;
        let expected = (-2.0 * PI * vartheta).exp();
        let defect = (product - expected).norm();
        if !(defect <= CONSISTENCY_TOLERANCE) {
            return Err(ModelError::InconsistentData { product, expected, defect });
        }
        let zero = Complex64::new(0.0, 0.0);
        if r1_at == zero && r2_at == zero {
            return Err(ModelError::Trivial);
        }
        let mut problem = Self { vartheta, r1_at, r2_at, orientation, psi: zero, phi: zero };
        let coefficients = psi_phi(&problem);
        problem.psi = coefficients.psi;
        problem.phi = coefficients.phi;
        Ok(problem)
    }

    /// Same reflection point, r2 adjusted so that ϑ is replaced by `vartheta`.
    fn with_vartheta(&self, vartheta: Complex64) -> Self {
        let (r1_at, r2_at) = if self.r1_at != Complex64::new(0.0, 0.0) {
            (self.r1_at, (1.0 - (-2.0 * PI * vartheta).exp()) / self.r1_at)
        } else {
            ((1.0 - (-2.0 * PI * vartheta).exp()) / self.r2_at, self.r2_at)
        };
        let mut shifted = Self { vartheta, r1_at, r2_at, ..*self };
        let coefficients = psi_phi(&shifted);
        shifted.psi = coefficients.psi;
        shifted.phi = coefficients.phi;
        shifted
    }

    fn half_plane(&self, upper: bool) -> HalfPlane {
        let v = self.vartheta;
        let i = Complex64::i();
        match (self.orientation, upper) {
            (StationaryPoint::Left, true) => HalfPlane {
                arg11: -FRAC_PI_4,
                arg22: -3.0 * FRAC_PI_4,
                pre11: (-3.0 * PI * v / 4.0).exp(),
                pre22: (PI * v / 4.0).exp(),
                nu11: -i * v,
                nu22: i * v,
            },
            (StationaryPoint::Left, false) => HalfPlane {
                arg11: 3.0 * FRAC_PI_4,
                arg22: FRAC_PI_4,
                pre11: (PI * v / 4.0).exp(),
                pre22: (-3.0 * PI * v / 4.0).exp(),
                nu11: -i * v,
                nu22: i * v,
            },
            (StationaryPoint::Right, true) => HalfPlane {
                arg11: -3.0 * FRAC_PI_4,
                arg22: -FRAC_PI_4,
                pre11: (-3.0 * PI * v / 4.0).exp(),
                pre22: (PI * v / 4.0).exp(),
                nu11: i * v,
                nu22: -i * v,
            },
            (StationaryPoint::Right, false) => HalfPlane {
                arg11: FRAC_PI_4,
                arg22: 3.0 * FRAC_PI_4,
                pre11: (PI * v / 4.0).exp(),
                pre22: (-3.0 * PI * v / 4.0).exp(),
                nu11: i * v,
                nu22: -i * v,
            },
        }
    }

    /// ±iλ̃/2: the diagonal coupling in the expressions for the
    /// off-diagonal entries (+ at λ0).
    fn diagonal_rate(&self, lambda_tilde: Complex64) -> Complex64 {
        let sign = match self.orientation {
            StationaryPoint::Left => 1.0,
            StationaryPoint::Right => -1.0,
        };
        sign * 0.5 * Complex64::i() * lambda_tilde
    }

    fn assemble(
        &self,
        lambda_tilde: Complex64,
        (m11, m11p): (Complex64, Complex64),
        (m22, m22p): (Complex64, Complex64),
    ) -> Mat2 {
        let rate = self.diagonal_rate(lambda_tilde);
        let m21 = (rate * m11 - m11p) / self.psi;
        let m12 = (-rate * m22 - m22p) / self.phi;
        Mat2::new(m11, m12, m21, m22)
    }

    fn diagonal(&self, lambda_tilde: Complex64, upper: bool) -> Result<[(Complex64, Complex64); 2], ModelError> {
        let hp = self.half_plane(upper);
        let c11 = Complex64::from_polar(1.0, hp.arg11);
        let c22 = Complex64::from_polar(1.0, hp.arg22);
        let (d11, d11p) = pcf_d_with_derivative(hp.nu11, c11 * lambda_tilde)?;
        let (d22, d22p) = pcf_d_with_derivative(hp.nu22, c22 * lambda_tilde)?;
        Ok([(hp.pre11 * d11, hp.pre11 * c11 * d11p), (hp.pre22 * d22, hp.pre22 * c22 * d22p)])
    }

    fn is_degenerate(&self) -> bool {
        self.psi == Complex64::new(0.0, 0.0) || self.phi == Complex64::new(0.0, 0.0)
    }
}

/// Ψ and Φ in closed form. At λ0 the powers of −1 are taken as e^{iπp} in Ψ
/// and e^{−iπp} in Φ; at λ1 the coefficients are the Γ-quotients that make
/// Ψ = −i[M1]_{12}, Φ = i[M1]_{21} (the model system there has the opposite
/// diagonal sign). ΨΦ = ϑ in both cases.
pub fn psi_phi(problem: &ModelProblem) -> PsiPhi {
    let v = problem.vartheta;
    let i = Complex64::i();
    let root = (2.0 * PI).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    let over = |r: Complex64, value: Complex64| if r == zero { zero } else { value / r };
    let (psi, phi) = match problem.orientation {
        StationaryPoint::Left => {
            let psi = root * (i * PI * (i * v + 0.5)).exp() * (-3.0 * i * FRAC_PI_4 + PI * v / 2.0).exp()
                * reciprocal_cgamma(i * v);
            let phi = -root * (-i * PI * (-i * v + 0.5)).exp() * (-i * FRAC_PI_4 + PI * v / 2.0).exp()
                * reciprocal_cgamma(-i * v);
            (over(problem.r1_at, psi), over(problem.r2_at, phi))
        }
        StationaryPoint::Right => {
            let psi = root * (-PI * v / 2.0 - 3.0 * i * FRAC_PI_4).exp() * reciprocal_cgamma(-i * v);
            let phi = -root * (-PI * v / 2.0 - i * FRAC_PI_4).exp() * reciprocal_cgamma(i * v);
            (over(problem.r1_at, psi), over(problem.r2_at, phi))
        }
    };
    PsiPhi { psi, phi, degenerate: psi == zero || phi == zero }
}

/// M(λ̃). Real λ̃ needs a side (boundary value from above or below). When Ψ
/// or Φ vanishes the off-diagonal entries are the limit ϑ → 0, taken as the
/// mean of the solutions at ϑ = ±1e-5 (error O(1e-10)).
pub fn model_solution(
    problem: &ModelProblem,
    lambda_tilde: Complex64,
    side: Option<Side>,
) -> Result<Mat2, ModelError> {
    let upper = match (lambda_tilde.im, side) {
        (im, _) if im > 0.0 => true,
        (im, _) if im < 0.0 => false,
        (_, Some(s)) => s == Side::Plus,
        (_, None) => return Err(ModelError::OnAxis(lambda_tilde)),
    };
    if problem.is_degenerate() {
        let plus = problem.with_vartheta(problem.vartheta + TRIANGULAR_STEP);
        let minus = problem.with_vartheta(problem.vartheta - TRIANGULAR_STEP);
        let a = model_solution(&plus, lambda_tilde, side)?;
        let b = model_solution(&minus, lambda_tilde, side)?;
        let [(m11, _), (m22, _)] = problem.diagonal(lambda_tilde, upper)?;
        let mut m = (a + b) * Complex64::new(0.5, 0.0);
        m[(0, 0)] = m11;
        m[(1, 1)] = m22;
        return Ok(m);
    }
    let [d11, d22] = problem.diagonal(lambda_tilde, upper)?;
    Ok(problem.assemble(lambda_tilde, d11, d22))
}

/// Boundary value at λ̃ = 0 from the closed forms of D_ν(0) and D′_ν(0).
fn origin_value(problem: &ModelProblem, upper: bool) -> Mat2 {
    let hp = problem.half_plane(upper);
    let c11 = Complex64::from_polar(1.0, hp.arg11);
    let c22 = Complex64::from_polar(1.0, hp.arg22);
    let d11 = (hp.pre11 * pcf_d_at_zero(hp.nu11), hp.pre11 * c11 * pcf_d_prime_at_zero(hp.nu11));
    let d22 = (hp.pre22 * pcf_d_at_zero(hp.nu22), hp.pre22 * c22 * pcf_d_prime_at_zero(hp.nu22));
    problem.assemble(Complex64::new(0.0, 0.0), d11, d22)
}

/// [[1 − r1 r2, −r2], [r1, 1]].
pub fn model_jump(problem: &ModelProblem) -> Mat2 {
    let (r1, r2) = (problem.r1_at, problem.r2_at);
    Mat2::new(1.0 - r1 * r2, -r2, r1, Complex64::new(1.0, 0.0))
}

fn inverse(m: &Mat2) -> Mat2 {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det
}

fn max_abs(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max |M₋(0)⁻¹M₊(0) − J| with M(0) from the D_ν(0) closed forms. Zero for
/// degenerate problems, whose jump is triangular and carried by the limit.
pub fn jump_product_check(problem: &ModelProblem) -> f64 {
    if problem.is_degenerate() {
        let plus = problem.with_vartheta(problem.vartheta + TRIANGULAR_STEP);
        let minus = problem.with_vartheta(problem.vartheta - TRIANGULAR_STEP);
        return jump_product_check(&plus).max(jump_product_check(&minus));
    }
    let product = inverse(&origin_value(problem, false)) * origin_value(problem, true);
    max_abs(&(product - model_jump(problem)))
}

/// max |M₋(x)⁻¹M₊(x) − J| over the given real points.
pub fn jump_constancy_check(problem: &ModelProblem, points: &[f64]) -> Result<f64, ModelError> {
    let jump = model_jump(problem);
    let mut worst: f64 = 0.0;
    for &x in points {
        let x = Complex64::new(x, 0.0);
        let plus = model_solution(problem, x, Some(Side::Plus))?;
        let minus = model_solution(problem, x, Some(Side::Minus))?;
        worst = worst.max(max_abs(&(inverse(&minus) * plus - jump)));
    }
    Ok(worst)
}

/// Coefficient matrix A(λ̃) of the model system M′ + A M = 0.
pub fn system_matrix(problem: &ModelProblem, lambda_tilde: Complex64) -> Mat2 {
    let rate = problem.diagonal_rate(lambda_tilde);
    Mat2::new(-rate, problem.psi, problem.phi, rate)
}

const FD_WEIGHTS: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// max |M′ + A M| at λ̃, with M′ from an eighth-order central difference of
/// step `step` along the real direction.
pub fn ode_residual(problem: &ModelProblem, lambda_tilde: Complex64, step: f64) -> Result<f64, ModelError> {
    let side = (lambda_tilde.im == 0.0).then_some(Side::Plus);
    let mut derivative = Mat2::zeros();
    for (k, &w) in FD_WEIGHTS.iter().enumerate() {
        let h = step * (k + 1) as f64;
        let ahead = model_solution(problem, lambda_tilde + h, side)?;
        let behind = model_solution(problem, lambda_tilde - h, side)?;
        derivative += (ahead - behind) * Complex64::new(w / step, 0.0);
    }
    let m = model_solution(problem, lambda_tilde, side)?;
    Ok(max_abs(&(derivative + system_matrix(problem, lambda_tilde) * m)))
}

/// |det M − 1| at λ̃.
pub fn det_defect(problem: &ModelProblem, lambda_tilde: Complex64, side: Option<Side>) -> Result<f64, ModelError> {
    let m = model_solution(problem, lambda_tilde, side)?;
    Ok((m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] - 1.0).norm())
}

/// max |Ψ − (∓i)[M1]_{12}|, |Φ − (±i)[M1]_{21}| against the moment formulas
/// (upper signs at λ0).
pub fn moment_consistency(problem: &ModelProblem) -> Result<f64, ModelError> {
    let m12 = model_m1(problem.r1_at, problem.vartheta, problem.orientation)?;
    let m21 = model_m1_21(problem.r2_at, problem.vartheta, problem.orientation)?;
    let i = Complex64::i();
    let (psi, phi) = match problem.orientation {
        StationaryPoint::Left => (i * m12, -i * m21),
        StationaryPoint::Right => (-i * m12, i * m21),
    };
    Ok((problem.psi - psi).norm().max((problem.phi - phi).norm()))
}

/// Upper (`true`) or lower triangular 2×2 with unit diagonal.
fn triangular(upper: bool, entry: Complex64) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if upper {
        Mat2::new(one, entry, zero, one)
    } else {
        Mat2::new(one, zero, entry, one)
    }
}

/// Scalar g with G0 = diag(g, 1/g): e^{iλ̃²/4}(−λ̃)^{−iϑ} at λ0,
/// e^{−iλ̃²/4}λ̃^{iϑ} at λ1 (principal logarithms).
pub fn normalization(problem: &ModelProblem, lambda_tilde: Complex64) -> Complex64 {
    let i = Complex64::i();
    let v = problem.vartheta;
    match problem.orientation {
        StationaryPoint::Left => (i * lambda_tilde * lambda_tilde / 4.0 - i * v * (-lambda_tilde).ln()).exp(),
        StationaryPoint::Right => (-i * lambda_tilde * lambda_tilde / 4.0 + i * v * lambda_tilde.ln()).exp(),
    }
}

/// The triangular factor T_j with G_j = G0 T_j in the sector containing
/// `arg` (radians in (−π, π]); identity outside the four sectors.
fn sector_factor(problem: &ModelProblem, arg: f64) -> Mat2 {
    let (r1, r2) = (problem.r1_at, problem.r2_at);
    let d = 1.0 - r1 * r2;
    let q = FRAC_PI_4;
    let (near_zero_upper, near_zero_lower, near_pi_upper, near_pi_lower) = (
        arg > 0.0 && arg < q,
        arg < 0.0 && arg > -q,
        arg > 3.0 * q,
        arg < -3.0 * q,
    );
    // the D factor of J sits on the half-axis where the normalization's
    // logarithm is cut: positive axis at λ0, negative axis at λ1
    let (lu_upper, lu_lower, ldu_upper, ldu_lower) = match problem.orientation {
        StationaryPoint::Left => (near_pi_upper, near_pi_lower, near_zero_upper, near_zero_lower),
        StationaryPoint::Right => (near_zero_upper, near_zero_lower, near_pi_upper, near_pi_lower),
    };
    if lu_upper {
        triangular(false, r1)
    } else if lu_lower {
        triangular(true, r2)
    } else if ldu_upper {
        triangular(true, -r2 / d)
    } else if ldu_lower {
        triangular(false, -r1 / d)
    } else {
        Mat2::identity()
    }
}

/// M^∞ = M G_j⁻¹ at λ̃, with the sector chosen from `arg`.
fn opened(problem: &ModelProblem, lambda_tilde: Complex64, m: &Mat2, arg: f64) -> Mat2 {
    let g = normalization(problem, lambda_tilde);
    let g0_inv = Mat2::new(1.0 / g, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), g);
    m * inverse(&sector_factor(problem, arg)) * g0_inv
}

/// The four ray jumps of M^∞ in closed form, rays oriented away from 0,
/// indexed by direction e^{iπ/4}, e^{3iπ/4}, e^{−3iπ/4}, e^{−iπ/4}.
pub fn ray_jump(problem: &ModelProblem, ray: usize, lambda_tilde: Complex64) -> Mat2 {
    let (r1, r2) = (problem.r1_at, problem.r2_at);
    let d = 1.0 - r1 * r2;
    let g2 = normalization(problem, lambda_tilde).powi(2);
    let left = matches!(problem.orientation, StationaryPoint::Left);
    match (ray, left) {
        (0, true) => triangular(true, -r2 / d * g2),
        (1, true) => triangular(false, -r1 / g2),
        (2, true) => triangular(true, r2 * g2),
        (3, true) => triangular(false, r1 / d / g2),
        (0, false) => triangular(false, r1 / g2),
        (1, false) => triangular(true, r2 / d * g2),
        (2, false) => triangular(false, -r1 / d / g2),
        (3, false) => triangular(true, -r2 * g2),
        _ => Mat2::identity(),
    }
}

/// Residuals of the opened problem M^∞ = M G_j⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenedResiduals {
    /// max over ray samples of |(M^∞₋)⁻¹M^∞₊ − J_ray|.
    pub rays: f64,
    /// max over real samples of |M^∞₊ − M^∞₋|.
    pub real_axis: f64,
}

/// Checks that G_j⁻¹ turns the constant-jump solution into one with only the
/// four ray jumps: the rays carry the closed-form jumps and ℝ carries none.
pub fn opened_problem_check(problem: &ModelProblem, radii: &[f64]) -> Result<OpenedResiduals, ModelError> {
    let angles = [FRAC_PI_4, 3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4, -FRAC_PI_4];
    let tilt = 1e-9;
    let mut rays: f64 = 0.0;
    for (ray, &angle) in angles.iter().enumerate() {
        for &rho in radii {
            let z = Complex64::from_polar(rho, angle);
            let m = model_solution(problem, z, None)?;
            // + side is to the left of the outgoing ray: larger argument
            let plus = opened(problem, z, &m, angle + tilt);
            let minus = opened(problem, z, &m, angle - tilt);
            rays = rays.max(max_abs(&(inverse(&minus) * plus - ray_jump(problem, ray, z))));
        }
    }
    let mut real_axis: f64 = 0.0;
    for &rho in radii {
        for x in [rho, -rho] {
            let z = Complex64::new(x, 0.0);
            let arg_plus = if x > 0.0 { tilt } else { PI - tilt };
            let arg_minus = if x > 0.0 { -tilt } else { -PI + tilt };
            let above = model_solution(problem, z, Some(Side::Plus))?;
            let below = model_solution(problem, z, Some(Side::Minus))?;
            let g_plus = normalization(problem, Complex64::new(x, 1e-300));
            let g_minus = normalization(problem, Complex64::new(x, -1e-300));
            let diag = |g: Complex64| {
                Mat2::new(1.0 / g, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), g)
            };
            let plus = above * inverse(&sector_factor(problem, arg_plus)) * diag(g_plus);
            let minus = below * inverse(&sector_factor(problem, arg_minus)) * diag(g_minus);
            real_axis = real_axis.max(max_abs(&(plus - minus)));
        }
    }
    Ok(OpenedResiduals { rays, real_axis })
}
