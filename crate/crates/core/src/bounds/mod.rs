//! Rate and error bounds of the hybrid scheme.
//!
//! Rates are in nats per real channel use.

pub use crate::codec::beta_prime;
use crate::error::{invalid, Result};
use crate::socc::NomographicFunction;

pub mod approx;
pub mod quadrature;
pub mod region;
pub mod smith;

pub use approx::{gaussian_to_tail, mse_to_tail, tail_to_mse, MseFromTail, TailIntegralSettings};
pub use region::{
    constrained_region_inner, constrained_region_outer, inner_bound_membership, GaussianRegion,
    InnerRegion, OuterRegion, RateRegion, SumRateRow, SumRateScenario, UserConstraint,
};
pub use smith::{ba_constrained_capacity, ba_constrained_capacity_with, BaSettings, ConstrainedCapacity, DiscreteInput};

/// Digital rates of one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub rates: Vec<f64>,
}

impl RatePoint {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.iter().any(|r| !(*r >= 0.0)) {
            return Err(invalid("rates", "must be non-negative"));
        }
        Ok(Self { rates })
    }

    pub fn sum(&self) -> f64 {
        self.rates.iter().sum()
    }
}

/// Quality of the analog part at rate `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalogQuality {
    pub beta: f64,
    pub beta_prime: f64,
    /// Mean squared error `V`.
    pub mse: f64,
}

impl AnalogQuality {
    pub fn new(beta: f64, noise_var: f64, amplitude: f64) -> Result<Self> {
        Ok(Self {
            beta,
            beta_prime: beta_prime(beta)?,
            mse: socc_mse(beta, noise_var, amplitude)?,
        })
    }

    /// `(ε, δ)` pair implied by the MSE through Chebyshev's inequality.
    pub fn tail(&self, eps: f64) -> Result<f64> {
        mse_to_tail(self.mse, eps)
    }
}

/// `C(x) = ½ ln(1 + x)`.
pub fn gaussian_capacity(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", "must be non-negative"));
    }
    Ok(0.5 * x.ln_1p())
}

/// `V = β' σ² / A_a²`.
pub fn socc_mse(beta: f64, noise_var: f64, amplitude: f64) -> Result<f64> {
    positive(noise_var, "noise_var")?;
    positive(amplitude, "amplitude")?;
    Ok(beta_prime(beta)? * noise_var / (amplitude * amplitude))
}

/// MSE of one computation per channel use, `σ² / A_a²`.
pub fn timeshare_mse(noise_var: f64, amplitude: f64) -> Result<f64> {
    positive(noise_var, "noise_var")?;
    positive(amplitude, "amplitude")?;
    Ok(noise_var / (amplitude * amplitude))
}

fn positive(x: f64, name: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, "must be positive and finite"))
    }
}

/// Converse on the sum rate of the digital users `J_d` with powers `powers`:
/// `min_{k ≤ K_a} C((ΣP + k²A_a²)/σ²) − [β/2 · ln(2k²/(πeV))]⁺`.
pub fn outer_bound_sumrate(
    powers: &[f64],
    analog_users: usize,
    amplitude: f64,
    noise_var: f64,
    beta: f64,
    mse: f64,
) -> Result<f64> {
    positive(amplitude, "amplitude")?;
    positive(noise_var, "noise_var")?;
    positive(mse, "mse")?;
    if !(beta >= 0.0) {
        return Err(invalid("beta", "must be non-negative"));
    }
    if powers.iter().any(|p| !(*p >= 0.0)) {
        return Err(invalid("powers", "must be non-negative"));
    }
    let total: f64 = powers.iter().sum();
    let mut best = f64::INFINITY;
    for k in 0..=analog_users {
        let k2 = (k * k) as f64;
        let cap = gaussian_capacity((total + k2 * amplitude * amplitude) / noise_var)?;
        let penalty = if k == 0 {
            0.0
        } else {
            (beta / 2.0 * (2.0 * k2 / (std::f64::consts::PI * std::f64::consts::E * mse)).ln()).max(0.0)
        };
        best = best.min(cap - penalty);
    }
    Ok(best)
}

/// `C(ΣP/σ²)`, the sum capacity ignoring analog users and amplitudes.
pub fn trivial_converse(powers: &[f64], noise_var: f64) -> Result<f64> {
    positive(noise_var, "noise_var")?;
    gaussian_capacity(powers.iter().sum::<f64>() / noise_var)
}

/// Exponent `x = 2 (ω⁻¹(ε))² / Δ_max² · A_a² / σ² · n_ℓ`.
pub fn nomographic_tail_exponent(
    eps: f64,
    function: &NomographicFunction,
    users: usize,
    block_len: usize,
    amplitude: f64,
    noise_var: f64,
) -> Result<f64> {
    positive(eps, "eps")?;
    positive(amplitude, "amplitude")?;
    positive(noise_var, "noise_var")?;
    function.validate(users)?;
    let t = function.omega_inverse(eps);
    let delta = function.delta_max(users);
    Ok(2.0 * t * t / (delta * delta) * amplitude * amplitude / noise_var * block_len as f64)
}

/// Predicted `P(|f − f̂| > ε) ≤ exp(−x)/√(πx)`, capped at one.
pub fn nomographic_tail(
    eps: f64,
    function: &NomographicFunction,
    users: usize,
    block_len: usize,
    amplitude: f64,
    noise_var: f64,
) -> Result<f64> {
    let x = nomographic_tail_exponent(eps, function, users, block_len, amplitude, noise_var)?;
    Ok(tail_from_exponent(x))
}

pub fn tail_from_exponent(x: f64) -> f64 {
    ((-x).exp() / (std::f64::consts::PI * x).sqrt()).min(1.0)
}

/// Reciprocal integers `1/m` inside `(lo, hi)`, ascending.
pub fn reciprocal_thresholds(lo: f64, hi: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (1..)
        .map(|m| 1.0 / m as f64)
        .skip_while(|t| *t >= hi)
        .take_while(|t| *t > lo)
        .collect();
    out.reverse();
    out
}

/// Intervals `(x_i, x_{i+1})` of a sampled curve where it moves by more
/// than `min_step`.
pub fn find_jumps(xs: &[f64], ys: &[f64], min_step: f64) -> Vec<(f64, f64)> {
    xs.windows(2)
        .zip(ys.windows(2))
        .filter(|(_, y)| (y[1] - y[0]).abs() > min_step)
        .map(|(x, _)| (x[0], x[1]))
        .collect()
}
