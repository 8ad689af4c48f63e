//! Single-user LDPC + 16QAM code on the real channel.
//!
//! A block of `N/4` complex symbols is carried on `N/2` real channel uses:
//! all real parts first, then all imaginary parts. This is the real
//! equivalent of a complex channel whose use `t` is the pair `(t, t + N/4)`,
//! so block structure imposed on each half acts on the complex symbols.
//! The constellation is scaled so the expected power per real use equals the
//! configured power.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::qam::{self, BITS_PER_SYMBOL};
use super::{check_user, Decoded, LdpcCode, MacCode, PowerBound};
use crate::error::{check_len, invalid, Result};

#[derive(Debug, Clone)]
pub struct LdpcQamCode {
    ldpc: Arc<LdpcCode>,
    power: f64,
    scale: f64,
}

impl LdpcQamCode {
    pub fn new(ldpc: Arc<LdpcCode>, power: f64) -> Result<Self> {
        if !ldpc.n().is_multiple_of(BITS_PER_SYMBOL) {
            return Err(invalid("ldpc", "code length must be a multiple of 4"));
        }
        if !(power > 0.0 && power.is_finite()) {
            return Err(invalid("power", "must be positive and finite"));
        }
        Ok(Self {
            ldpc,
            power,
            scale: (2.0 * power).sqrt(),
        })
    }

    pub fn ldpc(&self) -> &LdpcCode {
        &self.ldpc
    }

    /// Largest complex modulus of a real-equivalent signal laid out as
    /// real parts followed by imaginary parts.
    pub fn complex_peak(x: &[f64]) -> f64 {
        let (re, im) = x.split_at(x.len() / 2);
        re.iter().zip(im).fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }

    /// Soft bit estimates for one received block.
    pub fn llrs(&self, y: &[f64], noise_var: f64) -> Result<Vec<f64>> {
        check_len(self.block_len(), y.len())?;
        let (re, im) = y.split_at(y.len() / 2);
        let symbols: Vec<Complex64> = re
            .iter()
            .zip(im)
            .map(|(a, b)| Complex64::new(*a, *b) / self.scale)
            .collect();
        // Floor keeps the metrics finite in the noiseless limit.
        let var = (noise_var / (self.scale * self.scale)).max(1e-12);
        qam::demodulate_llr(&symbols, var)
    }
}

impl MacCode for LdpcQamCode {
    type Message = Vec<u8>;

    fn num_users(&self) -> usize {
        1
    }

    fn block_len(&self) -> usize {
        self.ldpc.n() / 2
    }

    fn power(&self, _user: usize) -> f64 {
        self.power
    }

    fn amplitude(&self, _user: usize) -> f64 {
        3.0 * qam::level_unit() * self.scale
    }

    fn power_bound(&self) -> PowerBound {
        PowerBound::Expected
    }

    fn rate(&self, _user: usize) -> f64 {
        self.ldpc.k() as f64 * std::f64::consts::LN_2 / self.block_len() as f64
    }

    fn message_bits(&self, _user: usize) -> usize {
        self.ldpc.k()
    }

    fn encode(&self, user: usize, message: &Vec<u8>) -> Result<Vec<f64>> {
        check_user(user, 1)?;
        let bits = self.ldpc.encode(message)?;
        let symbols = qam::modulate(&bits)?;
        let re = symbols.iter().map(|s| s.re * self.scale);
        let im = symbols.iter().map(|s| s.im * self.scale);
        Ok(re.chain(im).collect())
    }

    fn decode(&self, y: &[f64], noise_var: f64) -> Result<Decoded<Vec<u8>>> {
        let llr = self.llrs(y, noise_var)?;
        let d = self.ldpc.decode(&llr)?;
        Ok(Decoded {
            messages: vec![d.message],
            converged: d.converged,
        })
    }

    fn random_message(&self, _user: usize, rng: &mut dyn RngCore) -> Vec<u8> {
        (0..self.ldpc.k()).map(|_| rng.random_range(0..2u8)).collect()
    }

    fn bit_errors(&self, _user: usize, sent: &Vec<u8>, got: &Vec<u8>) -> usize {
        sent.iter().zip(got).filter(|(a, b)| a != b).count()
    }
}
