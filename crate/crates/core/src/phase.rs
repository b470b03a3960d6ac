//! Phase function f(λ) = λ(ξ + 2αλ + 4βλ²), its stationary points and the
//! steepest-descent legs through them.

use crate::scattering::EquationParams;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, SQRT_2};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("beta = 0 reduces to a single stationary point; not supported")]
    ZeroBeta,
    #[error("alpha^2 - 3 beta xi = {0} <= 0: stationary points coalesce or are complex")]
    Degenerate(f64),
    #[error("beta = {0} < 0 reverses the sign chart; only beta > 0 is supported")]
    NegativeBeta(f64),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
}

/// Which of the two stationary points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StationaryPoint {
    /// λ0, the left point.
    Left,
    /// λ1, the right point.
    Right,
}

/// (λ0, λ1) = ((−α ∓ √(α² − 3βξ)) / (6β)).
pub fn stationary_points(alpha: f64, beta: f64, xi: f64) -> Result<(f64, f64), PhaseError> {
    if !(alpha.is_finite() && beta.is_finite() && xi.is_finite()) {
        return Err(PhaseError::NonFinite("alpha, beta and xi must be finite"));
    }
    if beta == 0.0 {
        return Err(PhaseError::ZeroBeta);
    }
    let disc = alpha * alpha - 3.0 * beta * xi;
    if !(disc > 0.0) {
        return Err(PhaseError::Degenerate(disc));
    }
    let root = disc.sqrt();
    Ok(((-alpha - root) / (6.0 * beta), (-alpha + root) / (6.0 * beta)))
}

/// θ(x, t, λ) = λ(x + (2αλ + 4βλ²)t).
pub fn phase_theta(x: f64, t: f64, lambda: Complex64, alpha: f64, beta: f64) -> Complex64 {
    lambda * (x + (2.0 * alpha * lambda + 4.0 * beta * lambda * lambda) * t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGeometry {
    pub params: EquationParams,
    pub xi: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub discriminant: f64,
}

impl PhaseGeometry {
    pub fn new(params: EquationParams, xi: f64) -> Result<Self, PhaseError> {
        let (lambda0, lambda1) = stationary_points(params.alpha, params.beta, xi)?;
        if params.beta < 0.0 {
            return Err(PhaseError::NegativeBeta(params.beta));
        }
        Ok(Self {
            params,
            xi,
            lambda0,
            lambda1,
            discriminant: params.alpha * params.alpha - 3.0 * params.beta * xi,
        })
    }

    pub fn point(&self, which: StationaryPoint) -> f64 {
        match which {
            StationaryPoint::Left => self.lambda0,
            StationaryPoint::Right => self.lambda1,
        }
    }

    /// f(λ) = λ(ξ + 2αλ + 4βλ²).
    pub fn f(&self, lambda: Complex64) -> Complex64 {
        let EquationParams { alpha, beta } = self.params;
        lambda * (self.xi + 2.0 * alpha * lambda + 4.0 * beta * lambda * lambda)
    }

    /// f′(λ) = ξ + 4αλ + 12βλ².
    pub fn f_prime(&self, lambda: Complex64) -> Complex64 {
        let EquationParams { alpha, beta } = self.params;
        self.xi + 4.0 * alpha * lambda + 12.0 * beta * lambda * lambda
    }

    /// f″(λ) = 4α + 24βλ; equals ∓4√(α² − 3βξ) at λ0, λ1.
    pub fn f_second(&self, lambda: Complex64) -> Complex64 {
        4.0 * self.params.alpha + 24.0 * self.params.beta * lambda
    }

    /// α + 6βλ_j, negative at λ0 and positive at λ1.
    pub fn curvature_factor(&self, which: StationaryPoint) -> f64 {
        self.params.alpha + 6.0 * self.params.beta * self.point(which)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Sign of Re(i f(λ)); exactly zero on the real axis.
pub fn sign_re_if(lambda: Complex64, geometry: &PhaseGeometry) -> Sign {
    if lambda.im == 0.0 {
        return Sign::Zero;
    }
    let value = (Complex64::i() * geometry.f(lambda)).re;
    if value > 0.0 {
        Sign::Positive
    } else if value < 0.0 {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

/// One leg λ(ρ) = anchor + scale·anchor·ρ·direction, ρ ∈ [ρ_min, ρ_max].
#[derive(Debug, Clone, PartialEq)]
pub struct ContourDescriptor {
    pub anchor: f64,
    /// +1 on the λ1 leg, −1 on the λ0 leg.
    pub scale: f64,
    pub direction: Complex64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho: Vec<f64>,
    pub nodes: Vec<Complex64>,
}

impl ContourDescriptor {
    pub fn at(&self, rho: f64) -> Complex64 {
        self.anchor + self.scale * self.anchor * rho * self.direction
    }
}

/// Decay floor of |e^{±2itf}| at which the legs are cut off.
pub const LEG_DECAY_FLOOR: f64 = 1e-16;

/// The two-leg contours L and L* of the steepest-descent deformation, with
/// `samples` nodes per leg and the unbounded end (ρ → −∞) truncated where
/// the relevant exponential has decayed below [`LEG_DECAY_FLOOR`] at time `t`.
pub fn steepest_contours(
    geometry: &PhaseGeometry,
    t: f64,
    samples: usize,
) -> (Vec<ContourDescriptor>, Vec<ContourDescriptor>) {
    let upper3 = Complex64::from_polar(1.0, 3.0 * FRAC_PI_4);
    let upper1 = Complex64::from_polar(1.0, FRAC_PI_4);
    let make = |anchor: f64, scale: f64, direction: Complex64| {
        let mut leg = ContourDescriptor {
            anchor,
            scale,
            direction,
            rho_min: 0.0,
            rho_max: SQRT_2,
            rho: Vec::new(),
            nodes: Vec::new(),
        };
        leg.rho_min = truncation_rho(geometry, &leg, t);
        let n = samples.max(2);
        leg.rho = (0..n)
            .map(|k| leg.rho_min + (leg.rho_max - leg.rho_min) * k as f64 / (n - 1) as f64)
            .collect();
        leg.nodes = leg.rho.iter().map(|&r| leg.at(r)).collect();
        leg
    };
    let l = vec![
        make(geometry.lambda1, 1.0, upper3),
        make(geometry.lambda0, -1.0, upper1),
    ];
    let l_star = vec![
        make(geometry.lambda1, 1.0, upper3.conj()),
        make(geometry.lambda0, -1.0, upper1.conj()),
    ];
    (l, l_star)
}

fn truncation_rho(geometry: &PhaseGeometry, leg: &ContourDescriptor, t: f64) -> f64 {
    if !(t > 0.0) || leg.anchor == 0.0 {
        return -1.0;
    }
    let target = -LEG_DECAY_FLOOR.ln();
    let decay = |rho: f64| 2.0 * t * geometry.f(leg.at(rho)).im.abs();
    let mut rho = -0.125;
    while decay(rho) < target && rho > -1e6 {
        rho *= 2.0;
    }
    let (mut lo, mut hi) = (rho, rho / 2.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if decay(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
