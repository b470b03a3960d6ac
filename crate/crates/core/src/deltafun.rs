//! The scalar factor δ(λ) solving δ₊ = δ₋ (1 − r1 r2) on (λ0, λ1), δ → 1 at
//! infinity, together with ϑ(λj) = −ln(1 − r1 r2)(λj)/(2π) and the
//! normalized Cauchy integrals χ0, χ1.
//!
//! The logarithm of d = 1 − r1 r2 is the continuous branch obtained by
//! unwrapping its argument from the left end of the grid, where d = 1.

use crate::phase::{PhaseGeometry, StationaryPoint};
use crate::quad::{interval_nodes, PANEL_ORDER};
use crate::scattering::ScatteringData;
use crate::specfun::{log_ratio, Side, SpecFunError};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeltaError {
    #[error("|1 - r1 r2| = {modulus:e} < 1e-12 at lambda = {lambda}: argument tracking undefined")]
    BranchTracking { lambda: f64, modulus: f64 },
    #[error("stationary interval [{lambda0}, {lambda1}] not inside the reflection grid [{min}, {max}]")]
    OutsideGrid { lambda0: f64, lambda1: f64, min: f64, max: f64 },
    #[error(transparent)]
    Branch(#[from] SpecFunError),
}

/// Modulus of 1 − r1 r2 below which argument tracking is refused.
pub const TRACKING_FLOOR: f64 = 1e-12;
/// Largest argument increment accepted between consecutive tracking samples.
pub const TRACKING_MAX_STEP: f64 = PI / 4.0;

/// Continuous logarithm of 1 − r1 r2 along the real axis.
#[derive(Debug, Clone)]
pub struct LogTrack {
    xs: Vec<f64>,
    logs: Vec<Complex64>,
}

impl LogTrack {
    /// Unwraps arg(1 − r1 r2) from the left end of the grid up to `upto`,
    /// refining the sampling until every increment is below π/4.
    pub fn new(sdata: &ScatteringData, upto: f64) -> Result<Self, DeltaError> {
        let grid = sdata.grid;
        let upto = upto.min(grid.max());
        let mut xs = vec![grid.min];
        let first = sdata.one_minus_r1r2(grid.min);
        check_floor(grid.min, first)?;
        let mut logs = vec![first.ln()];
        let mut k = 1;
        while xs[xs.len() - 1] < upto {
            let target = grid.point(k).min(upto);
            k += 1;
            let mut left = *xs.last().unwrap();
            let mut pending = vec![target];
            while let Some(next) = pending.pop() {
                let d_left = sdata.one_minus_r1r2(left);
                let d_next = sdata.one_minus_r1r2(next);
                check_floor(next, d_next)?;
                let step = (d_next / d_left).arg();
                if step.abs() >= TRACKING_MAX_STEP && next - left > 1e-12 {
                    pending.push(next);
                    pending.push(0.5 * (left + next));
                    continue;
                }
                let prev = *logs.last().unwrap();
                logs.push(Complex64::new(d_next.norm().ln(), prev.im + step));
                xs.push(next);
                left = next;
            }
        }
        Ok(Self { xs, logs })
    }

    /// ln(1 − r1 r2)(s) on the tracked branch.
    pub fn log_at(&self, sdata: &ScatteringData, s: f64) -> Complex64 {
        let idx = self.xs.partition_point(|&x| x <= s);
        let k = if idx == 0 {
            0
        } else if idx >= self.xs.len() {
            self.xs.len() - 1
        } else if s - self.xs[idx - 1] <= self.xs[idx] - s {
            idx - 1
        } else {
            idx
        };
        let d_here = sdata.one_minus_r1r2(s);
        let d_ref = sdata.one_minus_r1r2(self.xs[k]);
        Complex64::new(d_here.norm().ln(), self.logs[k].im + (d_here / d_ref).arg())
    }

    /// Accumulated argument at the last tracked point.
    pub fn accumulated_arg(&self) -> f64 {
        self.logs.last().map(|l| l.im).unwrap_or(0.0)
    }
}

fn check_floor(lambda: f64, d: Complex64) -> Result<(), DeltaError> {
    if d.norm() < TRACKING_FLOOR {
        return Err(DeltaError::BranchTracking { lambda, modulus: d.norm() });
    }
    Ok(())
}

/// ϑ(λj) = −ln(1 − r1 r2)(λj)/(2π) on the tracked branch.
pub fn vartheta(
    sdata: &ScatteringData,
    geometry: &PhaseGeometry,
    which: StationaryPoint,
) -> Result<Complex64, DeltaError> {
    let at = geometry.point(which);
    let track = LogTrack::new(sdata, at)?;
    Ok(-track.log_at(sdata, at) / (2.0 * PI))
}

/// ϑ(λ0), ϑ(λ1), χ0(λ0), χ1(λ1) and the bound |Im ϑ| < 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaData {
    pub vartheta0: Complex64,
    pub vartheta1: Complex64,
    pub chi0_at_l0: Complex64,
    pub chi1_at_l1: Complex64,
    pub im_vartheta_bound_ok: bool,
}

/// Quadrature resolution for the χ integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaOptions {
    /// Longest panel of the uniform part of the rule.
    pub panel_length: f64,
    /// Ratio of the geometric grading toward the evaluation point.
    pub grading_ratio: f64,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self { panel_length: 0.05, grading_ratio: 0.25 }
    }
}

impl DeltaOptions {
    /// Halves every panel.
    pub fn refined(self) -> Self {
        Self { panel_length: 0.5 * self.panel_length, grading_ratio: self.grading_ratio.sqrt() }
    }
}

/// δ and its ingredients for one ray ξ.
#[derive(Debug, Clone)]
pub struct DeltaFactor<'a> {
    sdata: &'a ScatteringData,
    track: LogTrack,
    pub lambda0: f64,
    pub lambda1: f64,
    pub vartheta0: Complex64,
    pub vartheta1: Complex64,
    log_d0: Complex64,
    log_d1: Complex64,
    options: DeltaOptions,
}

impl<'a> DeltaFactor<'a> {
    pub fn new(
        sdata: &'a ScatteringData,
        geometry: &PhaseGeometry,
        options: DeltaOptions,
    ) -> Result<Self, DeltaError> {
        let (lambda0, lambda1) = (geometry.lambda0, geometry.lambda1);
        let grid = sdata.grid;
        if lambda0 <= grid.min || lambda1 >= grid.max() {
            return Err(DeltaError::OutsideGrid {
                lambda0,
                lambda1,
                min: grid.min,
                max: grid.max(),
            });
        }
        let track = LogTrack::new(sdata, lambda1)?;
        let log_d0 = track.log_at(sdata, lambda0);
        let log_d1 = track.log_at(sdata, lambda1);
        Ok(Self {
            sdata,
            track,
            lambda0,
            lambda1,
            vartheta0: -log_d0 / (2.0 * PI),
            vartheta1: -log_d1 / (2.0 * PI),
            log_d0,
            log_d1,
            options,
        })
    }

    pub fn vartheta(&self, which: StationaryPoint) -> Complex64 {
        match which {
            StationaryPoint::Left => self.vartheta0,
            StationaryPoint::Right => self.vartheta1,
        }
    }

    /// ln(1 − r1 r2)(s) − ln(1 − r1 r2)(λj).
    fn normalized_log(&self, s: f64, which: StationaryPoint) -> Complex64 {
        let base = match which {
            StationaryPoint::Left => self.log_d0,
            StationaryPoint::Right => self.log_d1,
        };
        self.track.log_at(self.sdata, s) - base
    }

    /// χj(λ) = (1/2πi) ∫_{λ0}^{λ1} [ln d(s) − ln d(λj)] / (s − λ) ds. On the
    /// open segment a side is required; at λ = λj the integral is regular.
    pub fn chi(
        &self,
        lambda: Complex64,
        which: StationaryPoint,
        side: Option<Side>,
    ) -> Result<Complex64, DeltaError> {
        let (a, b) = (self.lambda0, self.lambda1);
        let foot = lambda.re.clamp(a, b);
        let dist = (lambda - foot).norm();
        let g_foot = self.normalized_log(foot, which);
        let mut sum = Complex64::new(0.0, 0.0);
        for (s, w) in self.rule(foot, dist) {
            let diff = s - lambda;
            if diff.norm() == 0.0 {
                // node coincides with the evaluation point: use the derivative
                let h = 1e-6 * (b - a);
                let slope = (self.normalized_log((s + h).min(b), which)
                    - self.normalized_log((s - h).max(a), which))
                    / ((s + h).min(b) - (s - h).max(a));
                sum += w * slope;
                continue;
            }
            sum += w * (self.normalized_log(s, which) - g_foot) / diff;
        }
        if g_foot != Complex64::new(0.0, 0.0) {
            let on_open_cut = lambda.im == 0.0 && lambda.re > a && lambda.re < b;
            let endpoint = lambda == Complex64::from(a) || lambda == Complex64::from(b);
            if endpoint {
                return Err(DeltaError::Branch(SpecFunError::OnCut(lambda)));
            }
            let log_term = log_ratio(lambda, a.into(), b.into(), if on_open_cut { side } else { None })?;
            // ∫ ds/(s − λ) = ln((λ − λ1)/(λ − λ0))
            sum += g_foot * log_term;
        } else if lambda.im == 0.0 && lambda.re > a && lambda.re < b && side.is_none() {
            return Err(DeltaError::Branch(SpecFunError::OnCut(lambda)));
        }
        Ok(sum / (2.0 * PI * Complex64::i()))
    }

    /// Composite rule on [λ0, λ1] graded toward `foot` down to scale `dist`.
    fn rule(&self, foot: f64, dist: f64) -> Vec<(f64, f64)> {
        let (a, b) = (self.lambda0, self.lambda1);
        let ratio = self.options.grading_ratio;
        let mut out = Vec::new();
        let mut side = |lo: f64, hi: f64, toward_lo: bool| {
            let len = hi - lo;
            if len <= 0.0 {
                return;
            }
            let floor = dist.max(1e-15 * (b - a)).min(len);
            let levels = ((len / floor).ln() / (1.0 / ratio).ln()).ceil().clamp(0.0, 60.0) as usize + 1;
            let uniform = (len / self.options.panel_length).ceil().max(2.0) as usize;
            let mut breaks = vec![0.0];
            for k in (1..=levels).rev() {
                breaks.push(ratio.powi(k as i32));
            }
            let start = *breaks.last().unwrap();
            for k in 1..=uniform {
                breaks.push(start + (1.0 - start) * k as f64 / uniform as f64);
            }
            let (from, to) = if toward_lo { (lo, hi) } else { (hi, lo) };
            for (x, w) in interval_nodes(from, to, &breaks) {
                out.push((x, w.abs()));
            }
        };
        side(foot, b, true);
        side(a, foot, false);
        debug_assert!(out.len() % PANEL_ORDER == 0);
        out
    }

    /// δ through the λj representation ((λ−λ1)/(λ−λ0))^{iϑ(λj)} e^{χj(λ)}.
    pub fn delta_via(
        &self,
        lambda: Complex64,
        which: StationaryPoint,
        side: Option<Side>,
    ) -> Result<Complex64, DeltaError> {
        let on_open_cut = lambda.im == 0.0 && lambda.re > self.lambda0 && lambda.re < self.lambda1;
        let log_term = log_ratio(
            lambda,
            self.lambda0.into(),
            self.lambda1.into(),
            if on_open_cut { side } else { None },
        )?;
        let power = (Complex64::i() * self.vartheta(which) * log_term).exp();
        Ok(power * self.chi(lambda, which, side)?.exp())
    }

    /// δ(λ), choosing the representation normalized at the nearer stationary point.
    pub fn delta(&self, lambda: Complex64, side: Option<Side>) -> Result<Complex64, DeltaError> {
        let which = if lambda.re <= 0.5 * (self.lambda0 + self.lambda1) {
            StationaryPoint::Left
        } else {
            StationaryPoint::Right
        };
        self.delta_via(lambda, which, side)
    }

    pub fn delta_data(&self) -> Result<DeltaData, DeltaError> {
        Ok(DeltaData {
            vartheta0: self.vartheta0,
            vartheta1: self.vartheta1,
            chi0_at_l0: self.chi(self.lambda0.into(), StationaryPoint::Left, None)?,
            chi1_at_l1: self.chi(self.lambda1.into(), StationaryPoint::Right, None)?,
            im_vartheta_bound_ok: self.vartheta0.im.abs() < 0.5 && self.vartheta1.im.abs() < 0.5,
        })
    }

    /// 1 − r1 r2 at a real point, from the same interpolant the integrals use.
    pub fn jump(&self, s: f64) -> Complex64 {
        self.sdata.one_minus_r1r2(s)
    }
}

/// Outcome of the winding assumption test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingReport {
    pub ok: bool,
    /// Accumulated arg(1 − r1 r2) from the left end up to λ0 and λ1.
    pub arg_at_l0: f64,
    pub arg_at_l1: f64,
    pub im_vartheta0: f64,
    pub im_vartheta1: f64,
}

/// True iff the accumulated argument of 1 − r1 r2 up to each stationary point
/// lies in (−π, π), i.e. |Im ϑ(λj)| < 1/2.
pub fn winding_check(sdata: &ScatteringData, geometry: &PhaseGeometry) -> Result<WindingReport, DeltaError> {
    let track = LogTrack::new(sdata, geometry.lambda1)?;
    let arg0 = track.log_at(sdata, geometry.lambda0).im;
    let arg1 = track.log_at(sdata, geometry.lambda1).im;
    let report = WindingReport {
        ok: arg0.abs() < PI && arg1.abs() < PI,
        arg_at_l0: arg0,
        arg_at_l1: arg1,
        im_vartheta0: -arg0 / (2.0 * PI),
        im_vartheta1: -arg1 / (2.0 * PI),
    };
    if !report.ok {
        log::warn!(
            "winding assumption violated: accumulated arguments {:.6} at lambda0, {:.6} at lambda1",
            arg0,
            arg1
        );
    }
    Ok(report)
}
