//! Numerical solution of the matrix Riemann-Hilbert problem by Cauchy-operator
//! collocation, and reconstruction of q from the first moment.
//!
//! The contour is a union of straight oriented pieces, each split into
//! Gauss–Legendre panels. With M = I + C(μ(J − I)) the unknown boundary value
//! μ = M− solves μ − C−(μ(J − I)) = I, discretized at the nodes themselves:
//! the principal value is taken by subtracting f(z_i) inside each piece,
//! adding f(z_i)·ln|b − z_i|/|z_i − a| and the diagonal term w_i f′(z_i)
//! from panel-wise spectral differentiation. Then
//! M1 = −(1/2πi) Σ w_j μ_j (J_j − I) and q = 2i [M1]₁₂.

use crate::deltafun::{winding_check, DeltaError, DeltaFactor, DeltaOptions};
use crate::ode::Tolerance;
use crate::phase::{phase_theta, PhaseError, PhaseGeometry};
use crate::quad::{graded_breaks, reference_rule, segment_nodes, Node, PANEL_ORDER};
use crate::scattering::{scattering_matrix_complex, EquationParams, Profile, ScatteringData, ScatteringError};
use crate::Mat2;
use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("jump at node {node} (lambda = {lambda}) is {norm:.3e} away from the identity; limit is {limit}")]
    JumpTooLarge { node: usize, lambda: Complex64, norm: f64, limit: f64 },
    #[error("collocation failed: residual {residual:.3e}, condition estimate {condition:.3e}")]
    CollocationFailed { residual: f64, condition: f64 },
    #[error("system has not been solved")]
    NotSolved,
    #[error("invalid contour: {0}")]
    InvalidContour(String),
    #[error("the deformed contour needs the profile to continue s_ij off the axis")]
    MissingProfile,
    #[error("geometry is for xi = {geometry_xi}, but x/t = {ray_xi}")]
    RayMismatch { geometry_xi: f64, ray_xi: f64 },
    #[error("winding assumption violated (arg at lambda0 {arg0:.6}, at lambda1 {arg1:.6})")]
    Winding { arg0: f64, arg1: f64 },
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
}

/// Bound on ‖J − I‖ (Frobenius) accepted by [`solve_rh`].
pub const JUMP_NORM_LIMIT: f64 = 10.0;
/// Largest discrete residual accepted from the linear solve.
pub const RESIDUAL_LIMIT: f64 = 1e-10;
/// Reflection magnitude below which the real line is truncated.
pub const TRUNCATION_FLOOR: f64 = 1e-10;

/// A straight oriented piece a → b of the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: Complex64,
    pub end: Complex64,
}

/// Discretized Riemann-Hilbert problem: nodes, jumps and (after solving)
/// the boundary density and first moment.
#[derive(Debug, Clone, PartialEq)]
pub struct RHSystem {
    pub pieces: Vec<Piece>,
    pub nodes: Vec<Node>,
    /// Index into `pieces` for every node; nodes come in whole panels.
    pub piece_of: Vec<usize>,
    pub jumps: Vec<Mat2>,
    /// Rows of μ = M− at the nodes.
    pub density: Option<Vec<Mat2>>,
    pub m1: Option<Mat2>,
    pub residual: Option<f64>,
}

impl RHSystem {
    /// Nodes on the given pieces (breakpoints in [0, 1] per piece), jumps set to I.
    pub fn on_pieces(layout: &[(Piece, Vec<f64>)]) -> Result<Self, OracleError> {
        let mut pieces = Vec::with_capacity(layout.len());
        let mut nodes = Vec::new();
        let mut piece_of = Vec::new();
        for (k, (piece, breaks)) in layout.iter().enumerate() {
            if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(OracleError::InvalidContour(format!("piece {k}: breakpoints must increase")));
            }
            if piece.start == piece.end {
                return Err(OracleError::InvalidContour(format!("piece {k} has zero length")));
            }
            let added = segment_nodes(piece.start, piece.end, breaks);
            piece_of.extend(std::iter::repeat(k).take(added.len()));
            nodes.extend(added);
            pieces.push(*piece);
        }
        let n = nodes.len();
        Ok(Self {
            pieces,
            nodes,
            piece_of,
            jumps: vec![Mat2::identity(); n],
            density: None,
            m1: None,
            residual: None,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_det_defect(&self) -> f64 {
        self.jumps.iter().map(|j| (j.determinant() - 1.0).norm()).fold(0.0, f64::max)
    }
}

/// Jump of the undeformed problem at a real node:
/// [[1 − r1 r2, −r2 e^{−2iθ}], [r1 e^{2iθ}, 1]].
pub fn build_jump(sdata: &ScatteringData, x: f64, t: f64, node: f64) -> Mat2 {
    let (r1, r2) = (sdata.r1_at(node), sdata.r2_at(node));
    let EquationParams { alpha, beta } = sdata.params;
    let e = (2.0 * Complex64::i() * phase_theta(x, t, node.into(), alpha, beta)).exp();
    Mat2::new(1.0 - r1 * r2, -r2 / e, r1 * e, Complex64::new(1.0, 0.0))
}

/// Panel layout of the real-line contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealLineOptions {
    /// Longest panel.
    pub max_panel: f64,
    /// Oscillation periods of e^{2iθ} allowed per panel.
    pub periods_per_panel: f64,
    /// Refinement radius around λ0, λ1 as a fraction of λ1 − λ0.
    pub eps_disk: f64,
}

impl Default for RealLineOptions {
    fn default() -> Self {
        Self { max_panel: 0.25, periods_per_panel: 1.0, eps_disk: 0.1 }
    }
}

impl RealLineOptions {
    pub fn refined(self) -> Self {
        Self { max_panel: 0.5 * self.max_panel, periods_per_panel: 0.5 * self.periods_per_panel, ..self }
    }
}

/// Smallest Λ with |r1|, |r2| < [`TRUNCATION_FLOOR`] on the grid outside [−Λ, Λ].
pub fn truncation_radius(sdata: &ScatteringData) -> f64 {
    let grid = sdata.grid;
    let mut radius: Option<f64> = None;
    for k in 0..grid.n {
        if sdata.r1[k].norm() >= TRUNCATION_FLOOR || sdata.r2[k].norm() >= TRUNCATION_FLOOR {
            radius = Some(radius.unwrap_or(0.0).max(grid.point(k).abs()));
        }
    }
    match radius {
        Some(r) => (r + grid.step).min(grid.min.abs().max(grid.max().abs())),
        None => 0.0,
    }
}

/// Undeformed problem on [−Λ, Λ] with panels short enough for the local
/// frequency of e^{2iθ}, and refined inside the ε-disks around λ0, λ1 when
/// the ray has two real stationary points.
pub fn undeformed_system(
    sdata: &ScatteringData,
    x: f64,
    t: f64,
    options: RealLineOptions,
) -> Result<RHSystem, OracleError> {
    let radius = truncation_radius(sdata);
    if radius <= 0.0 {
        // no reflection at all: a single trivial panel
        let piece = Piece { start: Complex64::new(-1.0, 0.0), end: Complex64::new(1.0, 0.0) };
        return RHSystem::on_pieces(&[(piece, vec![0.0, 1.0])]);
    }
    let EquationParams { alpha, beta } = sdata.params;
    let mut disks: Vec<(f64, f64)> = Vec::new();
    let mut fixed: Vec<f64> = Vec::new();
    if t > 0.0 {
        if let Ok(g) = PhaseGeometry::new(sdata.params, x / t) {
            let eps = options.eps_disk * (g.lambda1 - g.lambda0);
            for p in [g.lambda0, g.lambda1] {
                disks.push((p - eps, p + eps));
                fixed.extend([p - eps, p, p + eps]);
            }
        }
    }
    fixed.retain(|p| p.abs() < radius);
    fixed.sort_by(f64::total_cmp);
    let in_disk = |s: f64| disks.iter().any(|&(lo, hi)| s >= lo && s < hi);
    let mut breaks = vec![-radius];
    let mut s = -radius;
    let mut next_fixed = fixed.into_iter().peekable();
    while s < radius {
        let freq = 2.0 * (x + (4.0 * alpha * s + 12.0 * beta * s * s) * t).abs() + 1e-12;
        let mut step = options.max_panel.min(2.0 * PI * options.periods_per_panel / freq);
        if in_disk(s) {
            step *= 0.5;
        }
        let mut next = (s + step).min(radius);
        while let Some(&p) = next_fixed.peek() {
            if p <= s {
                next_fixed.next();
            } else {
                if p < next {
                    next = p;
                }
                break;
            }
        }
        breaks.push(next);
        s = next;
    }
    let unit: Vec<f64> = breaks.iter().map(|b| (b + radius) / (2.0 * radius)).collect();
    let piece = Piece { start: Complex64::new(-radius, 0.0), end: Complex64::new(radius, 0.0) };
    let mut system = RHSystem::on_pieces(&[(piece, unit)])?;
    system.jumps = system.nodes.par_iter().map(|n| build_jump(sdata, x, t, n.z.re)).collect();
    Ok(system)
}

/// Role of a piece of the deformed contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformedPiece {
    /// Upper lens over (λ0, λ1), oriented λ0 → λ1: upper-triangular γ2 factor.
    UpperLens,
    /// Lower lens, oriented λ0 → λ1: lower-triangular γ1 factor.
    LowerLens,
    /// Ray from λ1 at angle π/4.
    RightUpper,
    /// Ray from λ1 at angle −π/4.
    RightLower,
    /// Ray from λ0 at angle 3π/4.
    LeftUpper,
    /// Ray from λ0 at angle −3π/4.
    LeftLower,
}

/// Resolution of the deformed contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedOptions {
    /// Geometric grading levels toward the stationary points.
    pub levels: usize,
    pub ratio: f64,
    /// Uniform panels after the graded part of each piece.
    pub uniform: usize,
    /// |e^{±2iθ}| at the truncated ray ends.
    pub decay_floor: f64,
    pub ode: Tolerance,
    pub delta: DeltaOptions,
}

impl Default for DeformedOptions {
    fn default() -> Self {
        Self {
            levels: 12,
            ratio: 0.25,
            uniform: 4,
            decay_floor: 1e-16,
            ode: Tolerance { rtol: 1e-12, atol: 1e-14, ..Tolerance::default() },
            delta: DeltaOptions::default(),
        }
    }
}

impl DeformedOptions {
    pub fn refined(self) -> Self {
        Self { levels: self.levels + 2, uniform: 2 * self.uniform, ..self }
    }
}

/// Everything needed to evaluate the opened jumps at arbitrary points.
pub struct DeformedJumps<'a> {
    pub geometry: PhaseGeometry,
    pub x: f64,
    pub t: f64,
    profile: &'a Profile,
    delta: DeltaFactor<'a>,
    tol: Tolerance,
}

impl<'a> DeformedJumps<'a> {
    pub fn new(
        sdata: &'a ScatteringData,
        geometry: &PhaseGeometry,
        x: f64,
        t: f64,
        options: &DeformedOptions,
    ) -> Result<Self, OracleError> {
        let profile = sdata.profile.as_ref().ok_or(OracleError::MissingProfile)?;
        if !(t > 0.0) || ((x / t) - geometry.xi).abs() > 1e-12 * geometry.xi.abs().max(1.0) {
            return Err(OracleError::RayMismatch { geometry_xi: geometry.xi, ray_xi: x / t });
        }
        let winding = winding_check(sdata, geometry)?;
        if !winding.ok {
            return Err(OracleError::Winding { arg0: winding.arg_at_l0, arg1: winding.arg_at_l1 });
        }
        let delta = DeltaFactor::new(sdata, geometry, options.delta)?;
        Ok(Self { geometry: *geometry, x, t, profile, delta, tol: options.ode })
    }

    fn exp_2i_theta(&self, z: Complex64) -> Complex64 {
        let p = self.geometry.params;
        (2.0 * Complex64::i() * phase_theta(self.x, self.t, z, p.alpha, p.beta)).exp()
    }

    /// (γ1, γ2, r1, r2) continued off the axis: γ1 = s21 s22 = r1/(1 − r1 r2),
    /// γ2 = s11 s12 = r2/(1 − r1 r2), r1 = s21/s11, r2 = s12/s22.
    pub fn reflection_factors(
        &self,
        z: Complex64,
    ) -> Result<(Complex64, Complex64, Complex64, Complex64), OracleError> {
        let s = scattering_matrix_complex(self.profile, z, self.tol)?;
        let (s11, s12, s21, s22) = (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
        Ok((s21 * s22, s11 * s12, s21 / s11, s12 / s22))
    }

    /// Jump of the opened problem on the given piece at an off-axis point.
    pub fn jump(&self, kind: DeformedPiece, z: Complex64) -> Result<Mat2, OracleError> {
        let (gamma1, gamma2, r1, r2) = self.reflection_factors(z)?;
        let d2 = self.delta.delta(z, None)?.powi(2);
        let e = self.exp_2i_theta(z);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let upper = |v: Complex64| Mat2::new(one, v, zero, one);
        let lower = |v: Complex64| Mat2::new(one, zero, v, one);
        Ok(match kind {
            DeformedPiece::UpperLens => upper(-gamma2 / e * d2),
            DeformedPiece::LowerLens => lower(gamma1 * e / d2),
            DeformedPiece::RightUpper => lower(r1 * e / d2),
            DeformedPiece::RightLower => upper(-r2 / e * d2),
            DeformedPiece::LeftUpper => lower(-r1 * e / d2),
            DeformedPiece::LeftLower => upper(r2 / e * d2),
        })
    }

    /// Ray length at which |e^{±2iθ}| has decayed to `floor` (quadratic model
    /// of f around the stationary point, with a 10% margin).
    pub fn ray_length(&self, floor: f64) -> f64 {
        1.1 * ((1.0 / floor).ln() / (4.0 * self.t * self.geometry.discriminant.sqrt())).sqrt()
    }
}

/// Opened contour: the two lens arcs through the apexes (λ0 + λ1)/2 ± i(λ1 − λ0)/2
/// and four truncated rays, each graded toward its stationary endpoint. The
/// real axis carries no jump after opening and is not discretized.
pub fn build_deformed_jumps(
    sdata: &ScatteringData,
    geometry: &PhaseGeometry,
    x: f64,
    t: f64,
    options: &DeformedOptions,
) -> Result<RHSystem, OracleError> {
    let jumps = DeformedJumps::new(sdata, geometry, x, t, options)?;
    let (l0, l1) = (Complex64::from(geometry.lambda0), Complex64::from(geometry.lambda1));
    let mid = 0.5 * (l0 + l1);
    let half = 0.5 * (geometry.lambda1 - geometry.lambda0);
    let apex_up = mid + Complex64::new(0.0, half);
    let apex_down = mid - Complex64::new(0.0, half);
    let length = jumps.ray_length(options.decay_floor);
    let ray = |from: Complex64, angle: f64| from + Complex64::from_polar(length, angle);
    let toward_start = graded_breaks(options.levels, options.ratio, options.uniform, false);
    let toward_end: Vec<f64> = toward_start.iter().rev().map(|b| 1.0 - b).collect();
    use DeformedPiece::*;
    let layout: Vec<(Piece, Vec<f64>, DeformedPiece)> = vec![
        (Piece { start: l0, end: apex_up }, toward_start.clone(), UpperLens),
        (Piece { start: apex_up, end: l1 }, toward_end.clone(), UpperLens),
        (Piece { start: l0, end: apex_down }, toward_start.clone(), LowerLens),
        (Piece { start: apex_down, end: l1 }, toward_end, LowerLens),
        (Piece { start: l1, end: ray(l1, PI / 4.0) }, toward_start.clone(), RightUpper),
        (Piece { start: l1, end: ray(l1, -PI / 4.0) }, toward_start.clone(), RightLower),
        (Piece { start: l0, end: ray(l0, 3.0 * PI / 4.0) }, toward_start.clone(), LeftUpper),
        (Piece { start: l0, end: ray(l0, -3.0 * PI / 4.0) }, toward_start, LeftLower),
    ];
    let kinds: Vec<DeformedPiece> = layout.iter().map(|l| l.2).collect();
    let plain: Vec<(Piece, Vec<f64>)> = layout.into_iter().map(|(p, b, _)| (p, b)).collect();
    let mut system = RHSystem::on_pieces(&plain)?;
    let evaluated: Result<Vec<Mat2>, OracleError> = system
        .nodes
        .par_iter()
        .zip(system.piece_of.par_iter())
        .map(|(node, &k)| jumps.jump(kinds[k], node.z))
        .collect();
    system.jumps = evaluated?;
    Ok(system)
}

/// Spectral differentiation matrix on the reference nodes of one panel.
fn differentiation_matrix() -> &'static Vec<Vec<f64>> {
    static MATRIX: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    MATRIX.get_or_init(|| {
        let xs: Vec<f64> = reference_rule().iter().map(|p| p.0).collect();
        let n = xs.len();
        let bary: Vec<f64> = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| xs[i] - xs[j]).product())
            .collect();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                if i != j {
                    d[i][j] = bary[i] / bary[j] / (xs[i] - xs[j]);
                    row_sum += d[i][j];
                }
            }
            d[i][i] = -row_sum;
        }
        d
    })
}

/// Discrete C−: (C− f)(z_i) = Σ_j K_ij f_j.
fn cauchy_minus(system: &RHSystem) -> Vec<Vec<Complex64>> {
    let n = system.len();
    let nodes = &system.nodes;
    let rule = reference_rule();
    let dm = differentiation_matrix();
    let scale = 1.0 / (2.0 * PI * Complex64::i());
    (0..n)
        .into_par_iter()
        .map(|i| {
            let zi = nodes[i].z;
            let piece = system.piece_of[i];
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            let mut subtracted = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let k = nodes[j].w / (nodes[j].z - zi);
                row[j] = k;
                if system.piece_of[j] == piece {
                    subtracted += k;
                }
            }
            row[i] -= subtracted;
            // w_i f′(z_i) by differentiating the panel interpolant in its parameter
            let panel_start = i - i % PANEL_ORDER;
            let local = i - panel_start;
            let gw = rule[local].1;
            for (m, d) in dm[local].iter().enumerate() {
                row[panel_start + m] += gw * d;
            }
            let p = system.pieces[piece];
            row[i] += ((p.end - zi).norm() / (zi - p.start).norm()).ln();
            for v in row.iter_mut() {
                *v *= scale;
            }
            row[i] -= 0.5;
            row
        })
        .collect()
}

/// Solves μ − C−(μ(J − I)) = I for both rows of μ and fills in the density,
/// M1 and the relative residual of the discrete system.
pub fn solve_rh(system: RHSystem) -> Result<RHSystem, OracleError> {
    solve_rh_with_limit(system, RESIDUAL_LIMIT)
}

/// [`solve_rh`] with a caller-chosen residual bound.
pub fn solve_rh_with_limit(mut system: RHSystem, residual_limit: f64) -> Result<RHSystem, OracleError> {
    let n = system.len();
    let identity = Mat2::identity();
    for (k, j) in system.jumps.iter().enumerate() {
        let norm = (j - identity).norm();
        if !(norm <= JUMP_NORM_LIMIT) {
            return Err(OracleError::JumpTooLarge {
                node: k,
                lambda: system.nodes[k].z,
                norm,
                limit: JUMP_NORM_LIMIT,
            });
        }
    }
    let w: Vec<Mat2> = system.jumps.iter().map(|j| j - identity).collect();
    if w.iter().all(|m| m.iter().all(|v| *v == Complex64::new(0.0, 0.0))) {
        system.density = Some(vec![identity; n]);
        system.m1 = Some(Mat2::zeros());
        system.residual = Some(0.0);
        return Ok(system);
    }
    let kernel = cauchy_minus(&system);
    // unknown layout: [μ^(1) at all nodes, μ^(2) at all nodes]; block (c, a)
    // couples column c of μW to component a of μ
    let big = Mat::<Complex64>::from_fn(2 * n, 2 * n, |row, col| {
        let (c, i) = (row / n, row % n);
        let (a, j) = (col / n, col % n);
        let value = -kernel[i][j] * w[j][(a, c)];
        if row == col {
            value + 1.0
        } else {
            value
        }
    });
    let rhs = Mat::<Complex64>::from_fn(2 * n, 2, |row, col| {
        if row / n == col {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let lu = big.partial_piv_lu();
    let sol = lu.solve(&rhs);
    let check = &big * &sol - &rhs;
    let mut residual: f64 = 0.0;
    let mut sol_max: f64 = 0.0;
    for col in 0..2 {
        for row in 0..2 * n {
            residual = residual.max(check[(row, col)].norm());
            sol_max = sol_max.max(sol[(row, col)].norm());
        }
    }
    if !(residual <= residual_limit) {
        let big_norm = (0..2 * n)
            .map(|r| (0..2 * n).map(|c| big[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        return Err(OracleError::CollocationFailed { residual, condition: big_norm * sol_max });
    }
    let density: Vec<Mat2> = (0..n)
        .map(|i| Mat2::new(sol[(i, 0)], sol[(n + i, 0)], sol[(i, 1)], sol[(n + i, 1)]))
        .collect();
    let mut m1 = Mat2::zeros();
    for i in 0..n {
        m1 += density[i] * w[i] * system.nodes[i].w;
    }
    m1 *= -1.0 / (2.0 * PI * Complex64::i());
    system.density = Some(density);
    system.m1 = Some(m1);
    system.residual = Some(residual);
    Ok(system)
}

/// q = 2i [M1]₁₂.
pub fn reconstruct_q(system: &RHSystem) -> Result<Complex64, OracleError> {
    let m1 = system.m1.ok_or(OracleError::NotSolved)?;
    Ok(2.0 * Complex64::i() * m1[(0, 1)])
}

/// Which contour the oracle discretizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleMode {
    Undeformed(RealLineOptions),
    Deformed(DeformedOptions),
}

/// One oracle evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub x: f64,
    pub t: f64,
    pub q: Complex64,
    pub nodes: usize,
    pub residual: f64,
}

pub fn oracle_q(
    sdata: &ScatteringData,
    x: f64,
    t: f64,
    mode: &OracleMode,
) -> Result<OracleSample, OracleError> {
    oracle_q_with_limit(sdata, x, t, mode, RESIDUAL_LIMIT)
}

pub fn oracle_q_with_limit(
    sdata: &ScatteringData,
    x: f64,
    t: f64,
    mode: &OracleMode,
    residual_limit: f64,
) -> Result<OracleSample, OracleError> {
    let system = match mode {
        OracleMode::Undeformed(options) => undeformed_system(sdata, x, t, *options)?,
        OracleMode::Deformed(options) => {
            let geometry = PhaseGeometry::new(sdata.params, x / t)?;
            build_deformed_jumps(sdata, &geometry, x, t, options)?
        }
    };
    let nodes = system.len();
    let solved = solve_rh_with_limit(system, residual_limit)?;
    Ok(OracleSample {
        x,
        t,
        q: reconstruct_q(&solved)?,
        nodes,
        residual: solved.residual.unwrap_or(0.0),
    })
}

/// t = 0 inverse scattering on a set of x values, in parallel.
pub fn round_trip(
    sdata: &ScatteringData,
    xs: &[f64],
    options: RealLineOptions,
) -> Result<Vec<OracleSample>, OracleError> {
    xs.par_iter()
        .map(|&x| oracle_q(sdata, x, 0.0, &OracleMode::Undeformed(options)))
        .collect()
}
