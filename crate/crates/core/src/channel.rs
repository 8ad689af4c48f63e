//! Memoryless multiple-access channel realisations.
//!
//! * real additive MAC `y = Σ x_k + s + N` with optional per-use bias `s`,
//! * Middleton Class A impulsive noise (Poisson mixture of Gaussians),
//! * the complex fading MAC `y = Σ h_k x_k + N`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{check_len, invalid, Result, SoccError};

/// Tail mass below which the Poisson series of the Class A density is cut.
pub const MIDDLETON_TAIL_MASS: f64 = 1e-12;

/// Middleton Class A parameters with total power normalised to `variance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiddletonClassA {
    impulsive_index: f64,
    gaussian_ratio: f64,
    variance: f64,
}

impl MiddletonClassA {
    pub fn new(impulsive_index: f64, gaussian_ratio: f64, variance: f64) -> Result<Self> {
        if !(impulsive_index > 0.0 && impulsive_index.is_finite()) {
            return Err(invalid("impulsive_index", "must be positive and finite"));
        }
        if !(gaussian_ratio > 0.0 && gaussian_ratio.is_finite()) {
            return Err(invalid("gaussian_ratio", "must be positive and finite"));
        }
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(invalid("variance", "must be positive and finite"));
        }
        Ok(Self {
            impulsive_index,
            gaussian_ratio,
            variance,
        })
    }

    pub fn impulsive_index(&self) -> f64 {
        self.impulsive_index
    }

    pub fn gaussian_ratio(&self) -> f64 {
        self.gaussian_ratio
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Variance of the Gaussian component selected when `m` impulses occur.
    pub fn component_variance(&self, m: u64) -> f64 {
        self.variance * (m as f64 / self.impulsive_index + self.gaussian_ratio)
            / (1.0 + self.gaussian_ratio)
    }

    /// Mixture weights and component variances, truncated once the
    /// remaining Poisson mass drops below [`MIDDLETON_TAIL_MASS`].
    pub fn components(&self) -> Vec<(f64, f64)> {
        let a = self.impulsive_index;
        let mut out = Vec::new();
        let mut cumulative = 0.0;
        let mut m = 0u64;
        loop {
            let w = (-a + m as f64 * a.ln() - ln_gamma(m as f64 + 1.0)).exp();
            cumulative += w;
            out.push((w, self.component_variance(m)));
            // Past the mode the terms only shrink, so the tail is bounded by
            // 1 - cumulative.
            if m as f64 > a && 1.0 - cumulative < MIDDLETON_TAIL_MASS {
                break;
            }
            m += 1;
        }
        out
    }

    /// Probability density of the Class A law.
    pub fn pdf(&self, x: f64) -> f64 {
        self.components()
            .into_iter()
            .map(|(w, v)| w * (-x * x / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt())
            .sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        middleton_sample(self, rng)
    }
}

/// Draws one Class A sample: `m ~ Poisson(A)`, then `N(0, σ_m²)`.
pub fn middleton_sample<R: Rng + ?Sized>(params: &MiddletonClassA, rng: &mut R) -> f64 {
    let poisson = Poisson::new(params.impulsive_index).expect("validated rate");
    let m: f64 = poisson.sample(rng);
    let z: f64 = StandardNormal.sample(rng);
    z * params.component_variance(m as u64).sqrt()
}

/// Additive noise law of one real channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// `N(0, variance)`; `variance = 0` is the noiseless limit.
    Gaussian { variance: f64 },
    MiddletonClassA(MiddletonClassA),
}

impl NoiseModel {
    pub fn gaussian(variance: f64) -> Result<Self> {
        if !(variance >= 0.0 && variance.is_finite()) {
            return Err(invalid("variance", "must be non-negative and finite"));
        }
        Ok(NoiseModel::Gaussian { variance })
    }

    pub fn noiseless() -> Self {
        NoiseModel::Gaussian { variance: 0.0 }
    }

    pub fn middleton(impulsive_index: f64, gaussian_ratio: f64, variance: f64) -> Result<Self> {
        MiddletonClassA::new(impulsive_index, gaussian_ratio, variance).map(Self::MiddletonClassA)
    }

    pub fn variance(&self) -> f64 {
        match self {
            NoiseModel::Gaussian { variance } => *variance,
            NoiseModel::MiddletonClassA(m) => m.variance(),
        }
    }

    /// Same law rescaled to a new total power.
    pub fn with_variance(&self, variance: f64) -> Result<Self> {
        match self {
            NoiseModel::Gaussian { .. } => Self::gaussian(variance),
            NoiseModel::MiddletonClassA(m) => {
                Self::middleton(m.impulsive_index, m.gaussian_ratio, variance)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            NoiseModel::Gaussian { variance } => {
                if *variance == 0.0 {
                    0.0
                } else {
                    let z: f64 = StandardNormal.sample(rng);
                    z * variance.sqrt()
                }
            }
            NoiseModel::MiddletonClassA(m) => m.sample(rng),
        }
    }

    pub fn realize<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<f64> {
        (0..len).map(|_| self.sample(rng)).collect()
    }
}

/// Superposition `Σ_k x_k + bias + noise` for a fixed noise realisation.
pub fn superpose(inputs: &[&[f64]], bias: Option<&[f64]>, noise: &[f64]) -> Result<Vec<f64>> {
    let n = noise.len();
    let mut y = vec![0.0; n];
    for x in inputs {
        check_len(n, x.len())?;
        for (yi, xi) in y.iter_mut().zip(x.iter()) {
            *yi += xi;
        }
    }
    if let Some(b) = bias {
        check_len(n, b.len())?;
        for (yi, bi) in y.iter_mut().zip(b) {
            *yi += bi;
        }
    }
    for (yi, ni) in y.iter_mut().zip(noise) {
        *yi += ni;
    }
    Ok(y)
}

/// One block of the real MAC: `y_i = Σ_k x_{k,i} + bias_i + N_i`.
///
/// All inputs must share one length; with no inputs and no bias the output
/// is pure noise of length zero.
pub fn mac_output<R: Rng + ?Sized>(
    inputs: &[&[f64]],
    bias: Option<&[f64]>,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = inputs
        .first()
        .map(|x| x.len())
        .or(bias.map(|b| b.len()))
        .unwrap_or(0);
    let realization = noise.realize(n, rng);
    superpose(inputs, bias, &realization)
}

/// How "variance σ² per complex dimension" is split over I and Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplexNoiseConvention {
    /// Total complex variance σ², i.e. σ²/2 on each real component.
    #[default]
    SplitTotal,
    /// σ² on each real component.
    PerComponent,
}

impl ComplexNoiseConvention {
    pub fn component_variance(&self, variance: f64) -> f64 {
        match self {
            ComplexNoiseConvention::SplitTotal => variance / 2.0,
            ComplexNoiseConvention::PerComponent => variance,
        }
    }
}

/// Complex fading MAC `y = Σ_k h_k x_k + N` with circular Gaussian noise.
pub fn fading_mac_output<R: Rng + ?Sized>(
    inputs: &[&[Complex64]],
    fading: &[Complex64],
    noise_variance: f64,
    convention: ComplexNoiseConvention,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    check_len(inputs.len(), fading.len())?;
    if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
        return Err(invalid("noise_variance", "must be non-negative and finite"));
    }
    let n = inputs.first().map(|x| x.len()).unwrap_or(0);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for (x, h) in inputs.iter().zip(fading) {
        if x.len() != n {
            return Err(SoccError::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        for (yi, xi) in y.iter_mut().zip(x.iter()) {
            *yi += h * xi;
        }
    }
    let sd = convention.component_variance(noise_variance).sqrt();
    if sd > 0.0 {
        for yi in y.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *yi += Complex64::new(re * sd, im * sd);
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn additivity_noiseless() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = [1.0, 1.0];
        let y = mac_output(&[&x, &x], Some(&[3.0, 3.0]), &NoiseModel::noiseless(), &mut rng).unwrap();
        assert_eq!(y, vec![5.0, 5.0]);
        let z = mac_output(&[&[0.0; 4]], None, &NoiseModel::noiseless(), &mut rng).unwrap();
        assert_eq!(z, vec![0.0; 4]);
    }

    #[test]
    fn length_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = mac_output(&[&[1.0, 2.0], &[1.0]], None, &NoiseModel::noiseless(), &mut rng);
        assert!(matches!(e, Err(SoccError::DimensionMismatch { .. })));
    }

    #[test]
    fn parameter_validation() {
        assert!(NoiseModel::gaussian(-1.0).is_err());
        assert!(NoiseModel::middleton(0.0, 1.0, 1.0).is_err());
        assert!(NoiseModel::middleton(1.0, 0.0, 1.0).is_err());
        assert!(NoiseModel::middleton(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn component_variances_average_to_total() {
        let m = MiddletonClassA::new(0.7, 0.3, 2.0).unwrap();
        let mean: f64 = m.components().iter().map(|(w, v)| w * v).sum();
        assert!((mean - 2.0).abs() < 1e-10);
    }

    #[test]
    fn fading_single_user_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = vec![Complex64::new(1.0, 0.0); 20_000];
        let y = fading_mac_output(
            &[&x],
            &[Complex64::new(0.0, 1.0)],
            0.5,
            ComplexNoiseConvention::SplitTotal,
            &mut rng,
        )
        .unwrap();
        let mean = y.iter().sum::<Complex64>() / y.len() as f64;
        assert!((mean - Complex64::new(0.0, 1.0)).norm() < 0.02);
    }

    #[test]
    fn fading_rejects_mismatched_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = vec![Complex64::new(1.0, 0.0); 2];
        let e = fading_mac_output(&[&x], &[], 0.5, ComplexNoiseConvention::SplitTotal, &mut rng);
        assert!(e.is_err());
    }
}
