//! Reproducible Monte Carlo sweeps and bound exports.
//!
//! Every experiment is described by a serde-friendly spec so the CLI can read
//! it from JSON. Trials draw from [`SeedTree`] substreams keyed by grid point
//! and frame index, and batches are reduced in a fixed order, so the output
//! is byte-identical for any number of worker threads.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bounds::{SumRateRow, SumRateScenario};
use crate::channel::NoiseModel;
use crate::codec::{average_power, make_partition, peak_amplitude, LdpcCode, LdpcQamCode, MacCode, WrappedCode};
use crate::error::{invalid, Result, SoccError};
use crate::rng::{Purpose, SeedTree};
use crate::socc::{Activity, SoccConfig, SoccScheme};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Reads any experiment spec from a JSON file.
pub fn read_spec<T: DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Parity-check matrix of the digital code: either loaded from an alist file
/// or generated from a seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdpcSpec {
    pub codeword_bits: usize,
    pub checks: usize,
    pub column_weight: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub alist: Option<PathBuf>,
}

impl Default for LdpcSpec {
    fn default() -> Self {
        Self {
            codeword_bits: 2664,
            checks: 664,
            column_weight: 3,
            seed: 1,
            max_iterations: 50,
            alist: None,
        }
    }
}

impl LdpcSpec {
    pub fn build(&self) -> Result<LdpcCode> {
        let code = match &self.alist {
            Some(path) => LdpcCode::from_alist(&std::fs::read_to_string(path)?)?,
            None => LdpcCode::random_regular(self.codeword_bits, self.checks, self.column_weight, self.seed)?,
        };
        Ok(code.with_max_iterations(self.max_iterations))
    }
}

/// One SOCC system with a single LDPC + 16QAM digital user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSpec {
    pub analog_users: usize,
    /// `A_a²` in dB.
    pub analog_power_db: f64,
    /// Digital power per real channel use in dB.
    pub digital_power_db: f64,
    /// Peak constraint of the digital user; defaults to the wrapped code's
    /// own peak.
    pub digital_amplitude: Option<f64>,
    pub beta: f64,
    /// Real channel uses per round, `n`.
    pub block_len: usize,
    pub code: LdpcSpec,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            analog_users: 10,
            analog_power_db: -10.0,
            digital_power_db: 0.0,
            digital_amplitude: None,
            beta: 0.099,
            block_len: 1480,
            code: LdpcSpec::default(),
        }
    }
}

impl ScenarioSpec {
    pub fn base_code(&self) -> Result<LdpcQamCode> {
        LdpcQamCode::new(Arc::new(self.code.build()?), db_to_linear(self.digital_power_db))
    }

    /// Assembles the scheme around an already built base code.
    pub fn scheme(&self, base: LdpcQamCode, noise: NoiseModel) -> Result<SoccScheme<LdpcQamCode>> {
        let partition = make_partition(self.block_len, self.beta)?;
        if partition.digital_len() != base.block_len() {
            return Err(SoccError::Config(format!(
                "block_len {} leaves {} digital uses but the code needs {}",
                self.block_len,
                partition.digital_len(),
                base.block_len()
            )));
        }
        let amplitude = match self.digital_amplitude {
            Some(a) => a,
            None => WrappedCode::new(base.clone(), partition.clone())?.amplitude(0),
        };
        let config = SoccConfig {
            analog_users: self.analog_users,
            analog_amplitude: db_to_linear(self.analog_power_db).sqrt(),
            digital_power: vec![base.power(0)],
            digital_amplitude: vec![amplitude],
            noise,
            beta: self.beta,
            partition,
        };
        SoccScheme::new(config, base)
    }
}

/// Additive noise law, scaled to each grid point's power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseLaw {
    #[default]
    Gaussian,
    Middleton { impulsive_index: f64, gaussian_ratio: f64 },
}

impl NoiseLaw {
    /// `None` is the noiseless channel.
    pub fn model(&self, power_db: Option<f64>) -> Result<NoiseModel> {
        let Some(db) = power_db else {
            return Ok(NoiseModel::noiseless());
        };
        let var = db_to_linear(db);
        match *self {
            NoiseLaw::Gaussian => NoiseModel::gaussian(var),
            NoiseLaw::Middleton {
                impulsive_index,
                gaussian_ratio,
            } => NoiseModel::middleton(impulsive_index, gaussian_ratio, var),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialBudget {
    pub max_frames: usize,
    /// A grid point stops after the round in which this many frame errors
    /// have accumulated.
    pub max_frame_errors: usize,
    /// Frames per work item.
    pub batch: usize,
    /// Work items per round; stopping is only checked between rounds.
    pub batches_per_round: usize,
}

impl Default for TrialBudget {
    fn default() -> Self {
        Self {
            max_frames: 10_000,
            max_frame_errors: 200,
            batch: 16,
            batches_per_round: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    #[serde(default)]
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub noise: NoiseLaw,
    /// Noise power grid in dB; `null` entries are noiseless.
    pub noise_power_db: Vec<Option<f64>>,
    #[serde(default)]
    pub trials: TrialBudget,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerRow {
    pub noise_power_db: Option<f64>,
    pub frames: usize,
    pub bits: usize,
    pub bit_errors: usize,
    pub frame_errors: usize,
    /// Mean squared error of the block estimates.
    pub analog_mse: f64,
    /// Mean of `σ²/(n_ℓ A_a²)` over blocks.
    pub analog_mse_theory: f64,
}

impl BerRow {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits.max(1) as f64
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames.max(1) as f64
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    frames: usize,
    bits: usize,
    bit_errors: usize,
    frame_errors: usize,
    sq_error: f64,
    estimates: usize,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.frames += o.frames;
        self.bits += o.bits;
        self.bit_errors += o.bit_errors;
        self.frame_errors += o.frame_errors;
        self.sq_error += o.sq_error;
        self.estimates += o.estimates;
        self
    }
}

fn run_frames(scheme: &SoccScheme<LdpcQamCode>, seeds: SeedTree, grid: u64, frames: std::ops::Range<u64>) -> Result<Tally> {
    let code = scheme.code();
    let mut t = Tally::default();
    for f in frames {
        let message = code.random_message(0, &mut seeds.stream(grid, f, Purpose::Messages));
        let analog = scheme.random_analog(&mut seeds.stream(grid, f, Purpose::Analog));
        let noise = scheme
            .config()
            .noise
            .realize(scheme.block_len(), &mut seeds.stream(grid, f, Purpose::Noise));
        let out = scheme.round_with_noise(&analog, &[message], Activity::ALL, &noise)?;
        t.frames += 1;
        t.bits += code.message_bits(0);
        t.bit_errors += out.bit_errors;
        t.frame_errors += out.frame_error as usize;
        t.sq_error += out.analog_sq_error.iter().sum::<f64>();
        t.estimates += out.analog_sq_error.len();
    }
    Ok(t)
}

/// Digital BER/FER and analog MSE at every grid point.
pub fn run_ber_sweep(spec: &SimulationSpec) -> Result<Vec<BerRow>> {
    let budget = &spec.trials;
    if budget.batch == 0 || budget.batches_per_round == 0 {
        return Err(invalid("trials", "batch sizes must be positive"));
    }
    let base = spec.scenario.base_code()?;
    let seeds = SeedTree::new(spec.seed);
    let mut rows = Vec::with_capacity(spec.noise_power_db.len());
    for (grid, &db) in spec.noise_power_db.iter().enumerate() {
        let scheme = spec.scenario.scheme(base.clone(), spec.noise.model(db)?)?;
        let mut tally = Tally::default();
        while tally.frames < budget.max_frames && tally.frame_errors < budget.max_frame_errors {
            let start = tally.frames as u64;
            let end = (tally.frames + budget.batch * budget.batches_per_round).min(budget.max_frames) as u64;
            let ranges: Vec<_> = (start..end)
                .step_by(budget.batch)
                .map(|s| s..(s + budget.batch as u64).min(end))
                .collect();
            let parts = ranges
                .into_par_iter()
                .map(|r| run_frames(&scheme, seeds, grid as u64, r))
                .collect::<Result<Vec<_>>>()?;
            tally = parts.into_iter().fold(tally, Tally::merge);
        }
        let blocks = scheme.config().partition.num_blocks();
        let theory = (0..blocks).map(|l| scheme.config().analog_variance(l)).sum::<f64>() / blocks as f64;
        rows.push(BerRow {
            noise_power_db: db,
            frames: tally.frames,
            bits: tally.bits,
            bit_errors: tally.bit_errors,
            frame_errors: tally.frame_errors,
            analog_mse: tally.sq_error / tally.estimates.max(1) as f64,
            analog_mse_theory: theory,
        });
    }
    Ok(rows)
}

pub fn ber_csv(rows: &[BerRow]) -> String {
    let mut s = String::from(
        "noise_power_db,digital_ber,digital_fer,analog_mse,analog_mse_theory,frames,bit_errors,frame_errors\n",
    );
    for r in rows {
        let db = r.noise_power_db.map_or("none".to_string(), |d| d.to_string());
        let _ = writeln!(
            s,
            "{db},{:e},{:e},{:e},{:e},{},{},{}",
            r.ber(),
            r.fer(),
            r.analog_mse,
            r.analog_mse_theory,
            r.frames,
            r.bit_errors,
            r.frame_errors
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramSpec {
    #[serde(default)]
    pub scenario: ScenarioSpec,
    pub codewords: usize,
    #[serde(default = "default_bin_width")]
    pub bin_width: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_bin_width() -> f64 {
    0.01
}

/// Peak ratios `max|wrapped| / max|base|` over random codewords, with
/// amplitudes taken as complex moduli of the 16QAM channel uses.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeHistogram {
    pub ratios: Vec<f64>,
    /// Same ratio on the individual real channel uses.
    pub real_ratios: Vec<f64>,
    /// Largest `|‖wrapped‖²/‖base‖² − 1|`; the wrap is an isometry.
    pub max_energy_deviation: f64,
    /// Worst-case factor of the partition's maps.
    pub bound: f64,
    pub bin_width: f64,
}

impl AmplitudeHistogram {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    pub fn fraction_at_most(&self, x: f64) -> f64 {
        self.ratios.iter().filter(|r| **r <= x).count() as f64 / self.ratios.len().max(1) as f64
    }

    /// `(bin_left, relative_frequency)` pairs from the smallest occupied bin
    /// up to the bin holding the maximum.
    pub fn bins(&self) -> Vec<(f64, f64)> {
        if self.ratios.is_empty() {
            return Vec::new();
        }
        let index = |r: f64| (r / self.bin_width).floor() as i64;
        let lo = self.ratios.iter().map(|r| index(*r)).min().unwrap_or(0);
        let hi = self.ratios.iter().map(|r| index(*r)).max().unwrap_or(0);
        let mut counts = vec![0usize; (hi - lo + 1) as usize];
        for r in &self.ratios {
            counts[(index(*r) - lo) as usize] += 1;
        }
        let total = self.ratios.len() as f64;
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| ((lo + i as i64) as f64 * self.bin_width, c as f64 / total))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let digits = (-self.bin_width.log10()).ceil().max(0.0) as usize + 1;
        let mut s = String::from("bin_left,relative_frequency\n");
        for (left, freq) in self.bins() {
            let _ = writeln!(s, "{left:.digits$},{freq}");
        }
        s
    }
}

pub fn run_amplitude_histogram(spec: &HistogramSpec) -> Result<AmplitudeHistogram> {
    if !(spec.bin_width > 0.0 && spec.bin_width.is_finite()) {
        return Err(invalid("bin_width", "must be positive and finite"));
    }
    let base = spec.scenario.base_code()?;
    let partition = make_partition(spec.scenario.block_len, spec.scenario.beta)?;
    let code = WrappedCode::new(base, partition)?;
    let seeds = SeedTree::new(spec.seed);
    let pairs = (0..spec.codewords as u64)
        .into_par_iter()
        .map(|i| {
            let m = code.random_message(0, &mut seeds.stream(0, i, Purpose::Messages));
            let x = code.base().encode(0, &m)?;
            let w = code.wrap(&x)?;
            let energy = average_power(&w) * w.len() as f64 / (average_power(&x) * x.len() as f64);
            let complex = LdpcQamCode::complex_peak(&w) / LdpcQamCode::complex_peak(&x);
            Ok((complex, peak_amplitude(&w) / peak_amplitude(&x), (energy - 1.0).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AmplitudeHistogram {
        ratios: pairs.iter().map(|p| p.0).collect(),
        real_ratios: pairs.iter().map(|p| p.1).collect(),
        max_energy_deviation: pairs.iter().map(|p| p.2).fold(0.0, f64::max),
        bound: code.amplitude_factor(),
        bin_width: spec.bin_width,
    })
}

/// Channel constants of a sum-rate export, in dB where noted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsScenario {
    pub noise_db: f64,
    /// `A_a` in dB.
    pub analog_amplitude_db: f64,
    pub analog_users: usize,
    pub digital_power_db: f64,
    /// `A_k / √P_k`.
    pub digital_amplitude_factor: f64,
}

impl Default for BoundsScenario {
    fn default() -> Self {
        Self {
            noise_db: 0.0,
            analog_amplitude_db: 2.5,
            analog_users: 10,
            digital_power_db: 8.0,
            digital_amplitude_factor: 2.0 * std::f64::consts::SQRT_2,
        }
    }
}

impl BoundsScenario {
    pub fn build(&self) -> Result<SumRateScenario> {
        let p = db_to_linear(self.digital_power_db);
        SumRateScenario::new(
            db_to_linear(self.noise_db),
            db_to_linear(self.analog_amplitude_db),
            self.analog_users,
            p,
            self.digital_amplitude_factor * p.sqrt(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundsSweep {
    DigitalUsers { values: Vec<usize>, beta: f64 },
    Beta { values: Vec<f64>, digital_users: usize },
    BetaRange { start: f64, stop: f64, step: f64, digital_users: usize },
}

impl BoundsSweep {
    fn points(&self) -> Result<Vec<(usize, f64)>> {
        Ok(match self {
            BoundsSweep::DigitalUsers { values, beta } => values.iter().map(|&k| (k, *beta)).collect(),
            BoundsSweep::Beta { values, digital_users } => values.iter().map(|&b| (*digital_users, b)).collect(),
            BoundsSweep::BetaRange {
                start,
                stop,
                step,
                digital_users,
            } => {
                if !(*step > 0.0 && stop >= start) {
                    return Err(invalid("step", "need step > 0 and stop >= start"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| (*digital_users, start + step * i as f64)).collect()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    #[serde(default)]
    pub scenario: BoundsScenario,
    pub sweep: BoundsSweep,
}

pub fn run_bounds_export(spec: &BoundsSpec) -> Result<Vec<SumRateRow>> {
    let scenario = spec.scenario.build()?;
    spec.sweep
        .points()?
        .into_par_iter()
        .map(|(k, beta)| scenario.row(k, beta))
        .collect()
}

pub fn bounds_csv(sweep: &BoundsSweep, rows: &[SumRateRow]) -> String {
    let by_users = matches!(sweep, BoundsSweep::DigitalUsers { .. });
    let mut s = String::from(if by_users { "digital_users" } else { "beta" });
    s.push_str(",achievable_sum_rate_nats,converse_sum_rate_nats,trivial_converse_nats\n");
    for r in rows {
        let x = if by_users {
            r.digital_users.to_string()
        } else {
            format!("{:.6}", r.beta)
        };
        let _ = writeln!(s, "{x},{},{},{}", r.achievable, r.converse, r.trivial);
    }
    s
}
