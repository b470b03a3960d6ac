//! Composite Gauss–Legendre rules on straight segments of the complex plane.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use std::sync::OnceLock;

/// Points per panel of every composite rule in the crate.
pub const PANEL_ORDER: usize = 16;

/// Reference nodes and weights on [−1, 1], ascending.
pub fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut pairs = GaussLegendre::new(PANEL_ORDER)
            .expect("panel order is at least 2")
            .into_node_weight_pairs();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

/// A quadrature node on an oriented contour: position and complex weight dz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub z: Complex64,
    pub w: Complex64,
}

/// Breakpoints in [0, 1]: panels shrinking geometrically by `ratio` toward 0
/// (and toward 1 when `both_ends`) over `levels` levels, the rest split into
/// `uniform` equal panels.
pub fn graded_breaks(levels: usize, ratio: f64, uniform: usize, both_ends: bool) -> Vec<f64> {
    let uniform = uniform.max(1);
    let mut breaks = vec![0.0];
    for k in (1..=levels).rev() {
        breaks.push(ratio.powi(k as i32));
    }
    let start = *breaks.last().unwrap();
    let stop = if both_ends && levels > 0 { 1.0 - ratio } else { 1.0 };
    for k in 1..=uniform {
        breaks.push(start + (stop - start) * k as f64 / uniform as f64);
    }
    if both_ends {
        for k in 2..=levels {
            breaks.push(1.0 - ratio.powi(k as i32));
        }
        if levels > 0 {
            breaks.push(1.0);
        }
    }
    breaks
}

/// Composite nodes along the straight segment a → b with the given breakpoints.
pub fn segment_nodes(a: Complex64, b: Complex64, breaks: &[f64]) -> Vec<Node> {
    let rule = reference_rule();
    let mut out = Vec::with_capacity((breaks.len() - 1) * PANEL_ORDER);
    for pair in breaks.windows(2) {
        let (pa, pb) = (a + (b - a) * pair[0], a + (b - a) * pair[1]);
        let mid = (pa + pb) / 2.0;
        let half = (pb - pa) / 2.0;
        for &(t, w) in rule {
            out.push(Node { z: mid + half * t, w: half * w });
        }
    }
    out
}

/// Composite rule on a real interval.
pub fn interval_nodes(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    segment_nodes(a.into(), b.into(), breaks).into_iter().map(|n| (n.z.re, n.w.re)).collect()
}
