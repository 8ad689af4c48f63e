//! The hybrid scheme: analog users repeat their scaled value across each
//! block, digital users send zero-sum wrapped codewords, and the receiver
//! averages blocks for the analog estimates while the block adjoints strip
//! the analog part before digital decoding.

use rand::Rng;

use crate::channel::{superpose, NoiseModel};
use crate::codec::{BlockPartition, Decoded, MacCode, WrappedCode, CONSTRAINT_TOL};
use crate::error::{check_len, invalid, Result, SoccError};

pub mod fading;
pub mod nomographic;

pub use nomographic::NomographicFunction;

/// Scenario parameters of one SOCC system.
#[derive(Debug, Clone, PartialEq)]
pub struct SoccConfig {
    pub analog_users: usize,
    pub analog_amplitude: f64,
    /// Per digital user average power constraints.
    pub digital_power: Vec<f64>,
    /// Per digital user peak amplitude constraints.
    pub digital_amplitude: Vec<f64>,
    pub noise: NoiseModel,
    pub beta: f64,
    pub partition: BlockPartition,
}

impl SoccConfig {
    pub fn digital_users(&self) -> usize {
        self.digital_power.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.analog_users == 0 {
            return Err(invalid("analog_users", "need at least one analog user"));
        }
        if !(self.analog_amplitude > 0.0 && self.analog_amplitude.is_finite()) {
            return Err(invalid("analog_amplitude", "must be positive and finite"));
        }
        check_len(self.digital_power.len(), self.digital_amplitude.len())?;
        if self.digital_power.iter().any(|p| !(*p > 0.0)) {
            return Err(invalid("digital_power", "must be positive"));
        }
        if self.digital_amplitude.iter().any(|a| !(*a > 0.0)) {
            return Err(invalid("digital_amplitude", "must be positive"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(invalid("beta", "must lie in (0, 1)"));
        }
        if (self.partition.num_blocks() as f64) < self.beta * self.partition.total() as f64 - 1e-9 {
            return Err(invalid("partition", "fewer blocks than beta * n"));
        }
        Ok(())
    }

    /// Variance `σ²/(n_ℓ A_a²)` of the estimate of block `block`.
    pub fn analog_variance(&self, block: usize) -> f64 {
        analog_variance(
            self.noise.variance(),
            self.analog_amplitude,
            self.partition.lengths()[block],
        )
    }
}

pub fn analog_variance(noise_var: f64, amplitude: f64, block_len: usize) -> f64 {
    noise_var / (block_len as f64 * amplitude * amplitude)
}

/// Repeats `A_a s_ℓ` across block `ℓ`.
pub fn analog_encode(values: &[f64], partition: &BlockPartition, amplitude: f64) -> Result<Vec<f64>> {
    check_len(partition.num_blocks(), values.len())?;
    let mut out = Vec::with_capacity(partition.total());
    for (&s, &len) in values.iter().zip(partition.lengths()) {
        if !(-1.0..=1.0).contains(&s) {
            return Err(SoccError::OutOfRange {
                value: s,
                min: -1.0,
                max: 1.0,
            });
        }
        out.extend(std::iter::repeat_n(amplitude * s, len));
    }
    Ok(out)
}

/// Block sums scaled by `1/(n_ℓ A_a)`.
pub fn analog_decode(y: &[f64], partition: &BlockPartition, amplitude: f64) -> Result<Vec<f64>> {
    check_len(partition.total(), y.len())?;
    Ok(partition
        .blocks()
        .map(|(start, len)| y[start..start + len].iter().sum::<f64>() / (len as f64 * amplitude))
        .collect())
}

/// Which user groups transmit in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Activity {
    pub analog: bool,
    pub digital: bool,
}

impl Activity {
    pub const ALL: Activity = Activity {
        analog: true,
        digital: true,
    };
    pub const ANALOG_ONLY: Activity = Activity {
        analog: true,
        digital: false,
    };
    pub const DIGITAL_ONLY: Activity = Activity {
        analog: false,
        digital: true,
    };
}

/// Everything observed in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome<M> {
    /// Block estimates `f̂_ℓ`.
    pub estimates: Vec<f64>,
    /// True block sums `Σ_k s_{k,ℓ}` (zero when analog users are silent).
    pub targets: Vec<f64>,
    pub analog_sq_error: Vec<f64>,
    /// Input handed to the base decoder, `n - L` samples.
    pub decoder_input: Vec<f64>,
    /// `None` when digital users are silent.
    pub decoded: Option<Decoded<M>>,
    pub frame_error: bool,
    pub bit_errors: usize,
}

/// A configured scheme with its wrapped digital code.
#[derive(Debug, Clone)]
pub struct SoccScheme<C> {
    config: SoccConfig,
    code: WrappedCode<C>,
}

impl<C: MacCode> SoccScheme<C> {
    pub fn new(config: SoccConfig, base: C) -> Result<Self> {
        config.validate()?;
        if base.num_users() != config.digital_users() {
            return Err(SoccError::Config(format!(
                "code has {} users but the scenario declares {}",
                base.num_users(),
                config.digital_users()
            )));
        }
        let code = WrappedCode::new(base, config.partition.clone())?;
        for k in 0..config.digital_users() {
            if code.power(k) > config.digital_power[k] * (1.0 + CONSTRAINT_TOL) {
                return Err(SoccError::ConstraintViolation(format!(
                    "digital user {k}: code power {} exceeds {}",
                    code.power(k),
                    config.digital_power[k]
                )));
            }
            if code.amplitude(k) > config.digital_amplitude[k] * (1.0 + CONSTRAINT_TOL) {
                return Err(SoccError::ConstraintViolation(format!(
                    "digital user {k}: wrapped amplitude {} exceeds {}",
                    code.amplitude(k),
                    config.digital_amplitude[k]
                )));
            }
        }
        Ok(Self { config, code })
    }

    pub fn config(&self) -> &SoccConfig {
        &self.config
    }

    pub fn code(&self) -> &WrappedCode<C> {
        &self.code
    }

    pub fn block_len(&self) -> usize {
        self.config.partition.total()
    }

    /// Uniform analog values in `[-1, 1]`, one row per analog user.
    pub fn random_analog<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<f64>> {
        let blocks = self.config.partition.num_blocks();
        (0..self.config.analog_users)
            .map(|_| (0..blocks).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect()
    }

    /// Channel inputs of all active users, with constraint checks.
    pub fn transmit(
        &self,
        analog: &[Vec<f64>],
        digital: &[C::Message],
        activity: Activity,
    ) -> Result<Vec<Vec<f64>>> {
        let mut signals = Vec::new();
        if activity.analog {
            check_len(self.config.analog_users, analog.len())?;
            for row in analog {
                let x = analog_encode(row, &self.config.partition, self.config.analog_amplitude)?;
                signals.push(x);
            }
        }
        if activity.digital {
            check_len(self.config.digital_users(), digital.len())?;
            for (k, m) in digital.iter().enumerate() {
                let x = self.code.wrap_encode(k, m)?;
                self.code.check_codeword(k, &x)?;
                signals.push(x);
            }
        }
        Ok(signals)
    }

    /// One round against a fixed noise realisation.
    pub fn round_with_noise(
        &self,
        analog: &[Vec<f64>],
        digital: &[C::Message],
        activity: Activity,
        noise: &[f64],
    ) -> Result<RoundOutcome<C::Message>> {
        check_len(self.block_len(), noise.len())?;
        let signals = self.transmit(analog, digital, activity)?;
        let inputs: Vec<&[f64]> = signals.iter().map(Vec::as_slice).collect();
        let y = superpose(&inputs, None, noise)?;

        let partition = &self.config.partition;
        let estimates = analog_decode(&y, partition, self.config.analog_amplitude)?;
        let targets: Vec<f64> = if activity.analog {
            (0..partition.num_blocks())
                .map(|l| analog.iter().map(|row| row[l]).sum())
                .collect()
        } else {
            vec![0.0; partition.num_blocks()]
        };
        let analog_sq_error = estimates
            .iter()
            .zip(&targets)
            .map(|(e, t)| (e - t).powi(2))
            .collect();

        let decoder_input = self.code.unwrap_receive(&y)?;
        let (decoded, frame_error, bit_errors) = if activity.digital {
            let d = self.code.base().decode(&decoder_input, self.config.noise.variance())?;
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
        Ok(RoundOutcome {
            estimates,
            targets,
            analog_sq_error,
            decoder_input,
            decoded,
            frame_error,
            bit_errors,
        })
    }

    /// One round with noise drawn from the configured model.
    pub fn round<R: Rng + ?Sized>(
        &self,
        analog: &[Vec<f64>],
        digital: &[C::Message],
        activity: Activity,
        rng: &mut R,
    ) -> Result<RoundOutcome<C::Message>> {
        let noise = self.config.noise.realize(self.block_len(), rng);
        self.round_with_noise(analog, digital, activity, &noise)
    }
}
