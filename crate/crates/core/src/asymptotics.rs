//! Leading-order long-time behaviour of q(x, t) in the sector α² − 3βξ > 0.
//!
//! Each stationary point contributes 2i (δ⁰_j)² [M1^∞_j]_{12} / κ_j, where
//! κ0 = √(−8t(α+6βλ0)), κ1 = √(8t(α+6βλ1)) are the scaling factors of the
//! local variables λ̃ = κ_j (λ − λ_j) and M1^∞_j is the first moment of the
//! parabolic-cylinder model solution.

use crate::deltafun::{winding_check, DeltaData, DeltaError, DeltaFactor, DeltaOptions};
use crate::phase::{PhaseError, PhaseGeometry, StationaryPoint};
use crate::scattering::{EquationParams, ScatteringData};
use crate::specfun::{reciprocal_cgamma, Side};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error("t = {0} must be positive")]
    NonPositiveTime(f64),
    #[error("scaling base at {which:?} is {base:e} <= 0: outside the sector")]
    Sector { which: StationaryPoint, base: f64 },
    #[error(
        "winding assumption violated: Im vartheta(lambda0) = {im0:.6}, Im vartheta(lambda1) = {im1:.6} (need |.| < 1/2)"
    )]
    Winding { im0: f64, im1: f64 },
    #[error("r1 = 0 at {which:?} while vartheta = {vartheta} != 0: inconsistent reflection data")]
    InconsistentData { which: StationaryPoint, vartheta: Complex64 },
}

/// Default lower time limit of the asymptotic regime; smaller t is evaluated
/// but labelled as extrapolation.
pub const DEFAULT_T_MIN: f64 = 10.0;

/// How the scaling bases of δ⁰ are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Assembly {
    /// Bases −32λ0²t(α+6βλ0) and 32λ1²t(α+6βλ1), as in the closed formula.
    #[default]
    Literal,
    /// Bases with (λ1 − λ0)² in place of 4λj², keeping the finite factor
    /// (2λj/(λj − λk))^{∓iϑ} that the literal form drops. Identical when α = 0.
    Corrected,
}

/// Branch of √(α + 6βλ0), whose radicand is negative in the sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtBranch {
    /// √a = e^{iπ/2} √|a|.
    PlusHalfPi,
    /// √a = e^{−iπ/2} √|a|.
    MinusHalfPi,
}

impl SqrtBranch {
    pub fn phase(self) -> Complex64 {
        match self {
            SqrtBranch::PlusHalfPi => Complex64::i(),
            SqrtBranch::MinusHalfPi => -Complex64::i(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingOptions {
    pub t_min: f64,
    pub assembly: Assembly,
    pub delta: DeltaOptions,
}

impl Default for LeadingOptions {
    fn default() -> Self {
        Self { t_min: DEFAULT_T_MIN, assembly: Assembly::Literal, delta: DeltaOptions::default() }
    }
}

/// 1/2 + max(|Im ϑ0|, |Im ϑ1|): the decay order of the remainder.
pub fn error_exponent(vartheta0: Complex64, vartheta1: Complex64) -> f64 {
    0.5 + vartheta0.im.abs().max(vartheta1.im.abs())
}

/// Positive scaling base B_j whose iϑ/2 power enters δ⁰_j.
pub fn scaling_base(
    geometry: &PhaseGeometry,
    which: StationaryPoint,
    t: f64,
    assembly: Assembly,
) -> f64 {
    let a = geometry.curvature_factor(which);
    let square = match assembly {
        Assembly::Literal => 4.0 * geometry.point(which).powi(2),
        Assembly::Corrected => (geometry.lambda1 - geometry.lambda0).powi(2),
    };
    match which {
        StationaryPoint::Left => -8.0 * square * t * a,
        StationaryPoint::Right => 8.0 * square * t * a,
    }
}

/// κ_j = √(∓8t(α + 6βλj)), the factor in λ̃ = κ_j (λ − λj).
pub fn scaling_factor(geometry: &PhaseGeometry, which: StationaryPoint, t: f64) -> f64 {
    let a = geometry.curvature_factor(which);
    match which {
        StationaryPoint::Left => (-8.0 * t * a).sqrt(),
        StationaryPoint::Right => (8.0 * t * a).sqrt(),
    }
}

/// δ⁰_{λ0} = B0^{iϑ0/2} e^{2iλ0²t(4βλ0+α) + χ0(λ0)} and
/// δ⁰_{λ1} = B1^{−iϑ1/2} e^{2iλ1²t(4βλ1+α) + χ1(λ1)}.
pub fn delta0_factors(
    data: &DeltaData,
    geometry: &PhaseGeometry,
    t: f64,
    assembly: Assembly,
) -> Result<(Complex64, Complex64), AsymptoticsError> {
    if !(t > 0.0) {
        return Err(AsymptoticsError::NonPositiveTime(t));
    }
    let i = Complex64::i();
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (slot, which) in [StationaryPoint::Left, StationaryPoint::Right].into_iter().enumerate() {
        let base = scaling_base(geometry, which, t, assembly);
        if !(base > 0.0) {
            return Err(AsymptoticsError::Sector { which, base });
        }
        let (vartheta, chi, sign) = match which {
            StationaryPoint::Left => (data.vartheta0, data.chi0_at_l0, 1.0),
            StationaryPoint::Right => (data.vartheta1, data.chi1_at_l1, -1.0),
        };
        let lambda = geometry.point(which);
        let EquationParams { alpha, beta } = geometry.params;
        let oscillation = 2.0 * i * lambda * lambda * t * (4.0 * beta * lambda + alpha);
        out[slot] = (sign * i * vartheta / 2.0 * base.ln() + oscillation + chi).exp();
    }
    Ok((out[0], out[1]))
}

/// e^{iπp} with the base −1 = e^{iπ}, or e^{−iπp} with −1 = e^{−iπ}.
fn minus_one_pow(p: Complex64, upper: bool) -> Complex64 {
    let arg = if upper { PI } else { -PI };
    (Complex64::i() * arg * p).exp()
}

fn check_reflection(
    r: Complex64,
    vartheta: Complex64,
    which: StationaryPoint,
) -> Result<bool, AsymptoticsError> {
    if r == Complex64::new(0.0, 0.0) {
        if vartheta == Complex64::new(0.0, 0.0) {
            return Ok(false);
        }
        return Err(AsymptoticsError::InconsistentData { which, vartheta });
    }
    Ok(true)
}

/// [M1^∞]_{12} of the model problem at λ0 or λ1, with (−1) = e^{iπ} at λ0.
/// Zero when ϑ = 0 (1/Γ(0)).
pub fn model_m1(
    r1_at: Complex64,
    vartheta: Complex64,
    which: StationaryPoint,
) -> Result<Complex64, AsymptoticsError> {
    if !check_reflection(r1_at, vartheta, which)? {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i = Complex64::i();
    let root = (2.0 * PI).sqrt();
    Ok(match which {
        StationaryPoint::Left => {
            root * i * minus_one_pow(i * vartheta - 0.5, true)
                * (-3.0 * i * FRAC_PI_4 + PI * vartheta / 2.0).exp()
                * reciprocal_cgamma(i * vartheta)
                / r1_at
        }
        StationaryPoint::Right => {
            root * i * (-PI * vartheta / 2.0 - 3.0 * i * FRAC_PI_4).exp()
                * reciprocal_cgamma(-i * vartheta)
                / r1_at
        }
    })
}

/// [M1^∞]_{21}. At λ0 the power (−1)^{−iϑ−1/2} is taken with (−1) = e^{−iπ};
/// with e^{iπ} the moment contradicts the model problem's own jump.
pub fn model_m1_21(
    r2_at: Complex64,
    vartheta: Complex64,
    which: StationaryPoint,
) -> Result<Complex64, AsymptoticsError> {
    if !check_reflection(r2_at, vartheta, which)? {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i = Complex64::i();
    let root = (2.0 * PI).sqrt();
    Ok(match which {
        StationaryPoint::Left => {
            root * i * minus_one_pow(-i * vartheta - 0.5, false)
                * (-i * FRAC_PI_4 + PI * vartheta / 2.0).exp()
                * reciprocal_cgamma(-i * vartheta)
                / r2_at
        }
        StationaryPoint::Right => {
            root * i * (-PI * vartheta / 2.0 - i * FRAC_PI_4).exp() * reciprocal_cgamma(i * vartheta)
                / r2_at
        }
    })
}

/// Everything that enters the leading term at one (x, t).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticTerms {
    pub x: f64,
    pub t: f64,
    pub geometry: PhaseGeometry,
    pub delta_data: DeltaData,
    pub r1_l0: Complex64,
    pub r1_l1: Complex64,
    pub delta0_l0: Complex64,
    pub delta0_l1: Complex64,
    pub m1inf_12_l0: Complex64,
    pub m1inf_12_l1: Complex64,
    /// 2i [(M^{app}_{λ0})_1]_{12}.
    pub term_l0: Complex64,
    /// 2i [(M^{app}_{λ1})_1]_{12}.
    pub term_l1: Complex64,
    pub q_leading: Complex64,
    pub error_exponent: f64,
    /// t below the configured t_min.
    pub extrapolation: bool,
}

/// Leading-order evaluator for one ray ξ = x/t; δ data is computed once.
#[derive(Debug, Clone)]
pub struct RayEvaluator<'a> {
    pub geometry: PhaseGeometry,
    pub delta: DeltaFactor<'a>,
    pub delta_data: DeltaData,
    pub options: LeadingOptions,
    sdata: &'a ScatteringData,
}

impl<'a> RayEvaluator<'a> {
    /// Fails on sector violations and when the winding assumption does not hold.
    pub fn new(sdata: &'a ScatteringData, xi: f64, options: LeadingOptions) -> Result<Self, AsymptoticsError> {
        let geometry = PhaseGeometry::new(sdata.params, xi)?;
        let report = winding_check(sdata, &geometry)?;
        if !report.ok {
            return Err(AsymptoticsError::Winding { im0: report.im_vartheta0, im1: report.im_vartheta1 });
        }
        let delta = DeltaFactor::new(sdata, &geometry, options.delta)?;
        let delta_data = delta.delta_data()?;
        if !delta_data.im_vartheta_bound_ok {
            return Err(AsymptoticsError::Winding {
                im0: delta_data.vartheta0.im,
                im1: delta_data.vartheta1.im,
            });
        }
        Ok(Self { geometry, delta, delta_data, options, sdata })
    }

    pub fn terms_at(&self, t: f64) -> Result<AsymptoticTerms, AsymptoticsError> {
        let g = &self.geometry;
        let (delta0_l0, delta0_l1) = delta0_factors(&self.delta_data, g, t, self.options.assembly)?;
        let r1_l0 = self.sdata.r1_at(g.lambda0);
        let r1_l1 = self.sdata.r1_at(g.lambda1);
        let m1inf_12_l0 = model_m1(r1_l0, self.delta_data.vartheta0, StationaryPoint::Left)?;
        let m1inf_12_l1 = model_m1(r1_l1, self.delta_data.vartheta1, StationaryPoint::Right)?;
        let two_i = Complex64::new(0.0, 2.0);
        let term_l0 = two_i * delta0_l0 * delta0_l0 * m1inf_12_l0
            / scaling_factor(g, StationaryPoint::Left, t);
        let term_l1 = two_i * delta0_l1 * delta0_l1 * m1inf_12_l1
            / scaling_factor(g, StationaryPoint::Right, t);
        let extrapolation = t < self.options.t_min;
        if extrapolation {
            log::debug!("t = {t} below t_min = {}: extrapolation", self.options.t_min);
        }
        Ok(AsymptoticTerms {
            x: g.xi * t,
            t,
            geometry: *g,
            delta_data: self.delta_data,
            r1_l0,
            r1_l1,
            delta0_l0,
            delta0_l1,
            m1inf_12_l0,
            m1inf_12_l1,
            term_l0,
            term_l1,
            q_leading: term_l0 + term_l1,
            error_exponent: error_exponent(self.delta_data.vartheta0, self.delta_data.vartheta1),
            extrapolation,
        })
    }
}

/// q_leading(x, t) and the remainder exponent with default options.
pub fn leading_q(x: f64, t: f64, sdata: &ScatteringData) -> Result<(Complex64, f64), AsymptoticsError> {
    if !(t > 0.0) {
        return Err(AsymptoticsError::NonPositiveTime(t));
    }
    let terms = RayEvaluator::new(sdata, x / t, LeadingOptions::default())?.terms_at(t)?;
    Ok((terms.q_leading, terms.error_exponent))
}

/// The closed two-term formula written directly in t, ln t and
/// ln(32λj²(α+6βλj)) with the chosen branch of √(α+6βλ0). Agrees with the
/// assembled terms only for [`Assembly::Literal`] inputs.
pub fn theorem_closed_form(terms: &AsymptoticTerms, branch: SqrtBranch) -> Complex64 {
    let g = &terms.geometry;
    let EquationParams { alpha, beta } = g.params;
    let i = Complex64::i();
    let t = terms.t;
    let (v0, v1) = (terms.delta_data.vartheta0, terms.delta_data.vartheta1);
    let (l0, l1) = (g.lambda0, g.lambda1);
    let (a0, a1) = (g.curvature_factor(StationaryPoint::Left), g.curvature_factor(StationaryPoint::Right));
    let root_pi = PI.sqrt();
    // principal logarithm of the negative real 32λ0²a0
    let log_base0 = Complex64::new(32.0 * l0 * l0 * a0, 0.0).ln();
    let log_base1 = Complex64::new(32.0 * l1 * l1 * a1, 0.0).ln();
    let term0 = if terms.r1_l0 == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        let exponent = 4.0 * i * l0 * l0 * t * (4.0 * beta * l0 + alpha)
            + 2.0 * terms.delta_data.chi0_at_l0
            + PI * v0 / 2.0
            + i * FRAC_PI_4
            + i * v0.re * t.ln()
            + i * v0 * log_base0;
        let sqrt_a0 = branch.phase() * a0.abs().sqrt();
        root_pi * t.powf(-0.5 - v0.im) * exponent.exp() * reciprocal_cgamma(i * v0) / (sqrt_a0 * terms.r1_l0)
    };
    let term1 = if terms.r1_l1 == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        let exponent = 4.0 * i * l1 * l1 * t * (4.0 * beta * l1 + alpha)
            + 2.0 * terms.delta_data.chi1_at_l1
            - PI * v1 / 2.0
            + i * FRAC_PI_4
            - i * v1.re * t.ln()
            - i * v1 * log_base1;
        root_pi * t.powf(-0.5 + v1.im) * exponent.exp() * reciprocal_cgamma(-i * v1)
            / (a1.sqrt() * terms.r1_l1)
    };
    term0 + term1
}

/// Deviations |δ¹_{λj}(t, λ̃) − limit_j(λ̃)| of the scaled δ factors from
/// their claimed large-t limits λ̃^{−iϑ0} e^{iλ̃²/4} and λ̃^{iϑ1} e^{−iλ̃²/4}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledJumpDeviation {
    pub at_l0: f64,
    pub at_l1: f64,
}

/// Evaluates δ¹ as written, with principal powers throughout (so the cubic
/// correction uses (α+6βλ0)^{3/2} = −i|α+6βλ0|^{3/2}). The finite factor
/// (2λj/(λj − λk))^{∓iϑj} is kept, so the deviation tends to a nonzero
/// constant when λ0 ≠ −λ1.
pub fn scaled_jump_limit_check(
    evaluator: &RayEvaluator<'_>,
    t: f64,
    lambda_tilde: Complex64,
) -> Result<ScaledJumpDeviation, AsymptoticsError> {
    if !(t > 0.0) {
        return Err(AsymptoticsError::NonPositiveTime(t));
    }
    let g = &evaluator.geometry;
    let beta = g.params.beta;
    let i = Complex64::i();
    let (l0, l1) = (g.lambda0, g.lambda1);
    let (v0, v1) = (evaluator.delta_data.vartheta0, evaluator.delta_data.vartheta1);
    let k0 = scaling_factor(g, StationaryPoint::Left, t);
    let k1 = scaling_factor(g, StationaryPoint::Right, t);
    let a0 = Complex64::new(g.curvature_factor(StationaryPoint::Left), 0.0);
    let a1 = Complex64::new(g.curvature_factor(StationaryPoint::Right), 0.0);
    let lt = lambda_tilde;
    let root_2t = (2.0 * t).sqrt();

    let lambda_at_0 = lt / k0 + l0;
    let chi0 = evaluator.delta.chi(lambda_at_0, StationaryPoint::Left, side_for(lambda_at_0))?;
    let delta1_l0 = lt.powc(-i * v0)
        * (2.0 * l0 / (lt / k0 + l0 - l1)).powc(-i * v0)
        * (i / 4.0 * lt * lt * (1.0 - i * beta * lt / (root_2t * a0.powf(1.5)))).exp()
        * (chi0 - evaluator.delta_data.chi0_at_l0).exp();
    let limit_l0 = lt.powc(-i * v0) * (i * lt * lt / 4.0).exp();

    let lambda_at_1 = lt / k1 + l1;
    let chi1 = evaluator.delta.chi(lambda_at_1, StationaryPoint::Right, side_for(lambda_at_1))?;
    let delta1_l1 = lt.powc(i * v1)
        * (2.0 * l1 / (lt / k1 + l1 - l0)).powc(i * v1)
        * (-i / 4.0 * lt * lt * (1.0 + beta * lt / (root_2t * a1.powf(1.5)))).exp()
        * (chi1 - evaluator.delta_data.chi1_at_l1).exp();
    let limit_l1 = lt.powc(i * v1) * (-i * lt * lt / 4.0).exp();

    Ok(ScaledJumpDeviation {
        at_l0: (delta1_l0 - limit_l0).norm(),
        at_l1: (delta1_l1 - limit_l1).norm(),
    })
}

/// Real points of the cut are read from above.
fn side_for(lambda: Complex64) -> Option<Side> {
    (lambda.im == 0.0).then_some(Side::Plus)
}

/// Angle of the four rays of the scaled cross through λ̃ = 0.
pub fn cross_directions() -> [Complex64; 4] {
    [FRAC_PI_4, 3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4, -FRAC_PI_4].map(|a| Complex64::from_polar(1.0, a))
}
