//! Conversions between approximation criteria: Gaussian error law, mean
//! squared error `V`, and tail functions `ε ↦ δ(ε)`.

use super::quadrature::adaptive_simpson;
use crate::error::{invalid, Result, SoccError};

/// Tail of an `N(0, V)` error at `ε` via the Mills-ratio bound
/// `(√V/ε) √(2/π) exp(−ε²/(2V))`, capped at one.
pub fn gaussian_to_tail(mse: f64, eps: f64) -> Result<f64> {
    check(mse, eps)?;
    let z = eps / mse.sqrt();
    Ok(((2.0 / std::f64::consts::PI).sqrt() / z * (-z * z / 2.0).exp()).min(1.0))
}

/// Chebyshev: `δ = V/ε²`, capped at one.
pub fn mse_to_tail(mse: f64, eps: f64) -> Result<f64> {
    check(mse, eps)?;
    Ok((mse / (eps * eps)).min(1.0))
}

fn check(mse: f64, eps: f64) -> Result<()> {
    if !(mse >= 0.0 && mse.is_finite()) {
        return Err(invalid("mse", "must be non-negative and finite"));
    }
    if !(eps > 0.0) {
        return Err(invalid("eps", "must be positive"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailIntegralSettings {
    /// Truncation point `E_max` of `∫ δ(√e) de`.
    pub e_max: f64,
    pub tolerance: f64,
    pub max_depth: usize,
    /// Doublings of `E_max` probed to bound the discarded tail.
    pub tail_probes: usize,
}

impl Default for TailIntegralSettings {
    fn default() -> Self {
        Self {
            e_max: 100.0,
            tolerance: 1e-10,
            max_depth: 40,
            tail_probes: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseFromTail {
    /// `∫_0^{E_max} min(1, δ(√e)) de`.
    pub estimate: f64,
    /// Quadrature error estimate on `[0, E_max]`.
    pub quadrature_error: f64,
    /// Bound on the discarded part beyond `E_max`.
    pub truncation_bound: f64,
}

impl MseFromTail {
    pub fn upper(&self) -> f64 {
        self.estimate + self.quadrature_error + self.truncation_bound
    }
}

/// MSE implied by a tail function: `V ≤ ∫_0^∞ min(1, δ(√e)) de`.
/// `δ` is only evaluated at positive arguments.
///
/// The tail beyond `E_max` is bounded by integrating over successive
/// doublings; if the pieces stop shrinking geometrically the integral is
/// reported as divergent.
pub fn tail_to_mse(delta: &dyn Fn(f64) -> f64, settings: &TailIntegralSettings) -> Result<MseFromTail> {
    if !(settings.e_max > 0.0 && settings.e_max.is_finite()) {
        return Err(invalid("e_max", "must be positive and finite"));
    }
    let g = |e: f64| if e > 0.0 { delta(e.sqrt()).clamp(0.0, 1.0) } else { 1.0 };
    let body = adaptive_simpson(&g, 0.0, settings.e_max, settings.tolerance, settings.max_depth)?;
    let mut pieces = Vec::with_capacity(settings.tail_probes);
    let mut a = settings.e_max;
    for _ in 0..settings.tail_probes.max(2) {
        let piece = adaptive_simpson(&g, a, 2.0 * a, settings.tolerance, settings.max_depth)?;
        pieces.push(piece.value + piece.error);
        a *= 2.0;
    }
    let last = pieces[pieces.len() - 1];
    let prev = pieces[pieces.len() - 2];
    let truncation_bound = if last <= 0.0 {
        pieces.iter().sum()
    } else {
        let ratio = if prev > 0.0 { last / prev } else { 1.0 };
        if ratio >= 0.9 {
            return Err(SoccError::Divergent(format!(
                "tail pieces shrink by a factor of only {ratio:.3} per doubling"
            )));
        }
        pieces.iter().sum::<f64>() + last * ratio / (1.0 - ratio)
    };
    Ok(MseFromTail {
        estimate: body.value,
        quadrature_error: body.error,
        truncation_bound,
    })
}
