//! Quadrature rules: composite 5-point Gauss–Legendre and adaptive Simpson.

use crate::error::{invalid, Result, SoccError};

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Nodes and weights of a composite rule on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Composite 5-point Gauss–Legendre rule with panels no wider than
/// `max_panel`.
pub fn composite_gauss_legendre(lo: f64, hi: f64, max_panel: f64) -> Result<QuadratureGrid> {
    if !(hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(invalid("interval", "need finite lo < hi"));
    }
    if !(max_panel > 0.0) {
        return Err(invalid("max_panel", "must be positive"));
    }
    let panels = ((hi - lo) / max_panel).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * 5);
    let mut weights = Vec::with_capacity(panels * 5);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (t, w) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
            nodes.push(mid + 0.5 * h * t);
            weights.push(0.5 * h * w);
        }
    }
    Ok(QuadratureGrid { nodes, weights })
}

/// Integral estimate with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: usize) -> Result<Integral> {
    if !(b >= a && a.is_finite() && b.is_finite()) {
        return Err(invalid("interval", "need finite a <= b"));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut error = 0.0;
    let value = simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, &mut error)?;
    Ok(Integral { value, error })
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    error: &mut f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(SoccError::Quadrature("non-finite integrand".into()));
    }
    if delta.abs() <= 15.0 * tol || depth == 0 {
        *error += delta.abs() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, error)?
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, error)?)
}
