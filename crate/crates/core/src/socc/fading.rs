//! The scheme over the complex fading MAC `y = Σ h_k X_k + N`.
//!
//! Each transmitter packs consecutive real symbols as `(x'_{2i-1} + j x'_{2i})`
//! and pre-inverts its channel, so the receiver sees the real scheme on
//! twice as many real channel uses. Analog users run through a
//! [`NomographicFunction`] before and after the channel.

use num_complex::Complex64;
use rand::Rng;

use super::{analog_decode, analog_encode, Activity, NomographicFunction};
use crate::channel::{fading_mac_output, ComplexNoiseConvention};
use crate::codec::{BlockPartition, Decoded, MacCode, WrappedCode, CONSTRAINT_TOL};
use crate::error::{check_len, invalid, Result, SoccError};

/// `X_i = (x'_{2i} + j x'_{2i+1}) / h`.
pub fn fading_transmit_transform(x: &[f64], h: Complex64, user: usize) -> Result<Vec<Complex64>> {
    if h.norm() == 0.0 {
        return Err(SoccError::ZeroFading { user });
    }
    if !x.len().is_multiple_of(2) {
        return Err(invalid("x", "real signal length must be even"));
    }
    let inv = h.inv();
    Ok(x
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]) * inv)
        .collect())
}

/// Interleaves real and imaginary parts.
pub fn split_complex(y: &[Complex64]) -> Vec<f64> {
    y.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// `min_k |h_k| A_k`, the amplitude every analog user can afford after
/// channel inversion.
pub fn effective_analog_amplitude(fading: &[Complex64], amplitudes: &[f64]) -> Result<f64> {
    check_len(fading.len(), amplitudes.len())?;
    if fading.is_empty() {
        return Err(invalid("fading", "need at least one analog user"));
    }
    for (k, h) in fading.iter().enumerate() {
        if h.norm() == 0.0 {
            return Err(SoccError::ZeroFading { user: k });
        }
    }
    Ok(fading
        .iter()
        .zip(amplitudes)
        .map(|(h, a)| h.norm() * a)
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FadingConfig {
    pub function: NomographicFunction,
    pub analog_fading: Vec<Complex64>,
    /// Peak complex amplitude `A_k` of every analog user.
    pub analog_amplitudes: Vec<f64>,
    pub digital_fading: Vec<Complex64>,
    pub noise_variance: f64,
    pub convention: ComplexNoiseConvention,
    /// Block lengths in complex channel uses.
    pub partition: BlockPartition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FadingOutcome<M> {
    /// Estimates `f̂'_ℓ` of the pre-processed sums.
    pub sum_estimates: Vec<f64>,
    /// Post-processed estimates of `f`.
    pub estimates: Vec<f64>,
    pub targets: Vec<f64>,
    pub decoded: Option<Decoded<M>>,
    pub frame_error: bool,
    pub bit_errors: usize,
    /// Largest transmitted complex modulus over analog users.
    pub analog_peak: f64,
}

#[derive(Debug, Clone)]
pub struct FadingScheme<C> {
    config: FadingConfig,
    real_partition: BlockPartition,
    amplitude: f64,
    code: WrappedCode<C>,
}

impl<C: MacCode> FadingScheme<C> {
    /// `base` must have block length `2n - L` real uses.
    pub fn new(config: FadingConfig, base: C) -> Result<Self> {
        let users = config.analog_fading.len();
        config.function.validate(users)?;
        let amplitude = effective_analog_amplitude(&config.analog_fading, &config.analog_amplitudes)?;
        check_len(base.num_users(), config.digital_fading.len())?;
        for (k, h) in config.digital_fading.iter().enumerate() {
            if h.norm() == 0.0 {
                return Err(SoccError::ZeroFading { user: users + k });
            }
        }
        if !(config.noise_variance >= 0.0 && config.noise_variance.is_finite()) {
            return Err(invalid("noise_variance", "must be non-negative and finite"));
        }
        let real_partition =
            BlockPartition::new(config.partition.lengths().iter().map(|l| 2 * l).collect())?;
        let code = WrappedCode::new(base, real_partition.clone())?;
        Ok(Self {
            config,
            real_partition,
            amplitude,
            code,
        })
    }

    pub fn config(&self) -> &FadingConfig {
        &self.config
    }

    /// Effective analog amplitude `A_a`.
    pub fn analog_amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn code(&self) -> &WrappedCode<C> {
        &self.code
    }

    pub fn analog_users(&self) -> usize {
        self.config.analog_fading.len()
    }

    pub fn round<R: Rng + ?Sized>(
        &self,
        values: &[Vec<f64>],
        digital: &[C::Message],
        activity: Activity,
        rng: &mut R,
    ) -> Result<FadingOutcome<C::Message>> {
        let users = self.analog_users();
        let blocks = self.config.partition.num_blocks();
        let real_amp = self.amplitude / std::f64::consts::SQRT_2;
        let f = &self.config.function;

        let mut inputs: Vec<Vec<Complex64>> = Vec::new();
        let mut fading: Vec<Complex64> = Vec::new();
        let mut analog_peak: f64 = 0.0;
        if activity.analog {
            check_len(users, values.len())?;
            for (k, row) in values.iter().enumerate() {
                check_len(blocks, row.len())?;
                let pre = row
                    .iter()
                    .map(|&s| f.preprocess(k, s, users))
                    .collect::<Result<Vec<_>>>()?;
                let x = analog_encode(&pre, &self.real_partition, real_amp)?;
                let h = self.config.analog_fading[k];
                let tx = fading_transmit_transform(&x, h, k)?;
                let peak = tx.iter().map(|c| c.norm()).fold(0.0, f64::max);
                if peak > self.config.analog_amplitudes[k] * (1.0 + CONSTRAINT_TOL) {
                    return Err(SoccError::ConstraintViolation(format!(
                        "analog user {k}: complex peak {peak} exceeds {}",
                        self.config.analog_amplitudes[k]
                    )));
                }
                analog_peak = analog_peak.max(peak);
                inputs.push(tx);
                fading.push(h);
            }
        }
        if activity.digital {
            check_len(self.config.digital_fading.len(), digital.len())?;
            for (k, m) in digital.iter().enumerate() {
                let x = self.code.wrap_encode(k, m)?;
                let h = self.config.digital_fading[k];
                inputs.push(fading_transmit_transform(&x, h, users + k)?);
                fading.push(h);
            }
        }
        let n = self.config.partition.total();
        let silent = vec![Complex64::new(0.0, 0.0); n];
        let mut refs: Vec<&[Complex64]> = inputs.iter().map(Vec::as_slice).collect();
        if refs.is_empty() {
            refs.push(&silent);
            fading.push(Complex64::new(1.0, 0.0));
        }
        let y = fading_mac_output(
            &refs,
            &fading,
            self.config.noise_variance,
            self.config.convention,
            rng,
        )?;
        let y = split_complex(&y);

        let sum_estimates = analog_decode(&y, &self.real_partition, real_amp)?;
        let estimates: Vec<f64> = sum_estimates.iter().map(|&e| f.postprocess(e, users)).collect();
        let targets: Vec<f64> = if activity.analog {
            (0..blocks)
                .map(|l| {
                    let column: Vec<f64> = values.iter().map(|row| row[l]).collect();
                    f.evaluate(&column)
                })
                .collect()
        } else {
            vec![f.postprocess(-(users as f64), users); blocks]
        };

        let (decoded, frame_error, bit_errors) = if activity.digital {
            let var = self.config.convention.component_variance(self.config.noise_variance);
            let d = self.code.decode(&y, var)?;
            let mut errors = 0;
            let mut frame_error = !d.converged;
            for (k, (sent, got)) in digital.iter().zip(&d.messages).enumerate() {
                let e = self.code.bit_errors(k, sent, got);
                errors += e;
                frame_error |= e > 0;
            }
            (Some(d), frame_error, errors)
        } else {
            (None, false, 0)
        };
        Ok(FadingOutcome {
            sum_estimates,
            estimates,
            targets,
            decoded,
            frame_error,
            bit_errors,
            analog_peak,
        })
    }
}
