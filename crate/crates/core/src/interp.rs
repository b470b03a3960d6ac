//! Local four-point Lagrange interpolation of complex samples.

use num_complex::Complex64;

/// Uniform abscissae `min + k·step`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub min: f64,
    pub step: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(min: f64, max: f64, n: usize) -> Self {
        assert!(n >= 2 && max > min, "grid needs n ≥ 2 and max > min");
        Self { min, step: (max - min) / (n - 1) as f64, n }
    }

    pub fn max(&self) -> f64 {
        self.min + self.step * (self.n - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        self.min + self.step * k as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max()
    }

    /// Cubic interpolation of `values` sampled on this grid; `None` outside.
    pub fn interpolate(&self, values: &[Complex64], x: f64) -> Option<Complex64> {
        debug_assert_eq!(values.len(), self.n);
        if !self.contains(x) {
            return None;
        }
        let s = (x - self.min) / self.step;
        let last = self.n - 1;
        if self.n < 4 {
            let k = (s.floor() as usize).min(last - 1);
            let frac = s - k as f64;
            return Some(values[k] * (1.0 - frac) + values[k + 1] * frac);
        }
        let k = (s.floor() as usize).clamp(1, last - 2) - 1;
        let u = s - k as f64;
        Some(lagrange4(&values[k..k + 4], u))
    }
}

/// Lagrange cubic through samples at 0, 1, 2, 3 evaluated at `u`.
fn lagrange4(v: &[Complex64], u: f64) -> Complex64 {
    let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3
}

/// Cubic interpolation on strictly increasing, not necessarily uniform, abscissae.
pub fn interpolate_nonuniform(xs: &[f64], values: &[Complex64], x: f64) -> Option<Complex64> {
    let n = xs.len();
    if n < 2 || x < xs[0] || x > xs[n - 1] {
        return None;
    }
    let idx = xs.partition_point(|&p| p <= x).clamp(1, n - 1) - 1;
    if n < 4 {
        let frac = (x - xs[idx]) / (xs[idx + 1] - xs[idx]);
        return Some(values[idx] * (1.0 - frac) + values[idx + 1] * frac);
    }
    let k = idx.clamp(1, n - 3) - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in k..k + 4 {
        let mut weight = 1.0;
        for j in k..k + 4 {
            if j != i {
                weight *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += values[i] * weight;
    }
    Some(acc)
}
