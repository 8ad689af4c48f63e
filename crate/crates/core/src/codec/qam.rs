//! Gray-mapped 16QAM with unit average symbol energy.
//!
//! Each dimension carries two bits on a 4-PAM Gray map
//! `00 → -3, 01 → -1, 11 → +1, 10 → +3` (scaled by `1/√10`); bits `b0 b1`
//! drive the in-phase part and `b2 b3` the quadrature part.

use num_complex::Complex64;

use crate::error::{invalid, Result};

pub const BITS_PER_SYMBOL: usize = 4;

/// `1/√10`, half the spacing between adjacent levels.
pub fn level_unit() -> f64 {
    1.0 / 10f64.sqrt()
}

/// PAM level (in units of `1/√10`) and its Gray label.
const LEVELS: [(f64, [u8; 2]); 4] = [
    (-3.0, [0, 0]),
    (-1.0, [0, 1]),
    (1.0, [1, 1]),
    (3.0, [1, 0]),
];

fn pam(b0: u8, b1: u8) -> f64 {
    let level = match (b0, b1) {
        (0, 0) => -3.0,
        (0, 1) => -1.0,
        (1, 1) => 1.0,
        _ => 3.0,
    };
    level * level_unit()
}

pub fn modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(BITS_PER_SYMBOL) {
        return Err(invalid("bits", "length must be a multiple of 4"));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(invalid("bits", "entries must be 0 or 1"));
    }
    Ok(bits
        .chunks_exact(BITS_PER_SYMBOL)
        .map(|b| Complex64::new(pam(b[0], b[1]), pam(b[2], b[3])))
        .collect())
}

/// Exact LLRs of the two bits carried by one real dimension, for Gaussian
/// noise of variance `noise_var` on that dimension.
pub fn pam_llr(y: f64, noise_var: f64) -> [f64; 2] {
    let d = level_unit();
    let metric: Vec<f64> = LEVELS
        .iter()
        .map(|(a, _)| -(y - a * d).powi(2) / (2.0 * noise_var))
        .collect();
    let mut out = [0.0; 2];
    for (bit, slot) in out.iter_mut().enumerate() {
        let pick = |value: u8| {
            log_sum_exp(
                LEVELS
                    .iter()
                    .zip(&metric)
                    .filter(|((_, label), _)| label[bit] == value)
                    .map(|(_, &m)| m),
            )
        };
        *slot = pick(0) - pick(1);
    }
    out
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Bit LLRs of a symbol sequence; `noise_var` is per real dimension.
pub fn demodulate_llr(symbols: &[Complex64], noise_var: f64) -> Result<Vec<f64>> {
    if !(noise_var > 0.0 && noise_var.is_finite()) {
        return Err(invalid("noise_var", "must be positive and finite"));
    }
    let mut out = Vec::with_capacity(symbols.len() * BITS_PER_SYMBOL);
    for s in symbols {
        out.extend(pam_llr(s.re, noise_var));
        out.extend(pam_llr(s.im, noise_var));
    }
    Ok(out)
}

/// Hard decision `bit = 1` when the LLR is negative.
pub fn hard_decision(llr: &[f64]) -> Vec<u8> {
    llr.iter().map(|&l| (l < 0.0) as u8).collect()
}
