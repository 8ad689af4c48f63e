//! Nomographic functions `f(s) = ψ(Σ_k φ_k(s_k))` with an increment
//! majorant `ω`, all users drawing inputs from `[-1, 1]`.

use crate::error::{check_len, invalid, Result, SoccError};

#[derive(Debug, Clone, PartialEq)]
pub enum NomographicFunction {
    /// `Σ s_k`.
    Sum,
    /// `Σ w_k s_k`.
    WeightedSum(Vec<f64>),
    /// `(Σ |s_k|^p)^{1/p}`, `p ≥ 1`.
    PNorm(f64),
}

impl NomographicFunction {
    pub fn validate(&self, users: usize) -> Result<()> {
        match self {
            NomographicFunction::Sum => Ok(()),
            NomographicFunction::WeightedSum(w) => {
                check_len(users, w.len())?;
                if w.iter().all(|x| *x == 0.0) || w.iter().any(|x| !x.is_finite()) {
                    return Err(invalid("weights", "need finite weights, not all zero"));
                }
                Ok(())
            }
            NomographicFunction::PNorm(p) => {
                if *p >= 1.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(invalid("p", "must be finite and at least 1"))
                }
            }
        }
    }

    pub fn phi(&self, user: usize, s: f64) -> f64 {
        match self {
            NomographicFunction::Sum => s,
            NomographicFunction::WeightedSum(w) => w[user] * s,
            NomographicFunction::PNorm(p) => s.abs().powf(*p),
        }
    }

    /// Declared range `[φ_min, φ_max]` of `φ_k` on `[-1, 1]`.
    pub fn phi_range(&self, user: usize) -> (f64, f64) {
        match self {
            NomographicFunction::Sum => (-1.0, 1.0),
            NomographicFunction::WeightedSum(w) => (-w[user].abs(), w[user].abs()),
            NomographicFunction::PNorm(_) => (0.0, 1.0),
        }
    }

    /// `Δ_max = max_k (φ_k,max − φ_k,min)`.
    pub fn delta_max(&self, users: usize) -> f64 {
        (0..users)
            .map(|k| {
                let (lo, hi) = self.phi_range(k);
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Domain of `ψ` on which it is applied after clipping.
    pub fn psi_domain(&self) -> (f64, f64) {
        match self {
            NomographicFunction::PNorm(_) => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn psi(&self, x: f64) -> f64 {
        match self {
            NomographicFunction::PNorm(p) => x.powf(1.0 / p),
            _ => x,
        }
    }

    pub fn omega(&self, t: f64) -> f64 {
        match self {
            NomographicFunction::PNorm(p) => t.powf(1.0 / p),
            _ => t,
        }
    }

    pub fn omega_inverse(&self, eps: f64) -> f64 {
        match self {
            NomographicFunction::PNorm(p) => eps.powf(*p),
            _ => eps,
        }
    }

    pub fn evaluate(&self, s: &[f64]) -> f64 {
        self.psi(s.iter().enumerate().map(|(k, &v)| self.phi(k, v)).sum())
    }

    /// `s' = 2(φ_k(s) − φ_k,min)/Δ_max − 1 ∈ [-1, 1]`.
    pub fn preprocess(&self, user: usize, s: f64, users: usize) -> Result<f64> {
        if !(-1.0..=1.0).contains(&s) {
            return Err(SoccError::OutOfRange {
                value: s,
                min: -1.0,
                max: 1.0,
            });
        }
        let v = self.phi(user, s);
        let (lo, hi) = self.phi_range(user);
        if v < lo - 1e-12 || v > hi + 1e-12 {
            return Err(SoccError::OutOfRange {
                value: v,
                min: lo,
                max: hi,
            });
        }
        Ok((2.0 * (v - lo) / self.delta_max(users) - 1.0).clamp(-1.0, 1.0))
    }

    /// `ψ((f̂' + K_a) Δ_max / 2 + Σ_k φ_k,min)`, clipped to the domain of `ψ`.
    pub fn postprocess(&self, estimate: f64, users: usize) -> f64 {
        let offset: f64 = (0..users).map(|k| self.phi_range(k).0).sum();
        let arg = (estimate + users as f64) * self.delta_max(users) / 2.0 + offset;
        let (lo, hi) = self.psi_domain();
        self.psi(arg.clamp(lo, hi))
    }
}
