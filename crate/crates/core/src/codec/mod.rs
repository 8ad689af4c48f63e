//! Digital multiple-access codes and the zero-sum wrapper.
//!
//! A [`MacCode`] is any family of per-user encoders with a joint decoder. The
//! [`WrappedCode`] turns a base code of length `n - L` into a code of length
//! `n` whose codewords sum to zero inside every block of a [`BlockPartition`],
//! so a receiver that averages blocks never sees the digital traffic.

use std::fmt::Debug;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{check_len, invalid, Result, SoccError};
use crate::zerosum::{PlaneMap, PlaneMapCache};

pub mod codebook;
pub mod ldpc;
pub mod ldpc_qam;
pub mod qam;

pub use codebook::RandomCodebookMac;
pub use ldpc::LdpcCode;
pub use ldpc_qam::LdpcQamCode;

/// Relative slack allowed when checking power and amplitude declarations.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// How a code's declared power is met.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerBound {
    /// Every codeword satisfies `‖x‖²/n ≤ P`.
    PerCodeword,
    /// Only the average over equiprobable messages satisfies it.
    Expected,
}

/// Output of a joint decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded<M> {
    pub messages: Vec<M>,
    /// `false` when an iterative decoder stopped at its iteration cap.
    pub converged: bool,
}

/// A digital code for the real additive MAC `y = Σ_k x_k + N`.
pub trait MacCode: Send + Sync {
    type Message: Clone + PartialEq + Debug + Send + Sync;

    fn num_users(&self) -> usize;

    /// Real channel uses per codeword.
    fn block_len(&self) -> usize;

    /// Declared average power per channel use of user `user`.
    fn power(&self, user: usize) -> f64;

    /// Declared peak amplitude of user `user`.
    fn amplitude(&self, user: usize) -> f64;

    fn power_bound(&self) -> PowerBound;

    /// Rate of user `user` in nats per real channel use.
    fn rate(&self, user: usize) -> f64;

    /// Number of information bits carried by one message of `user`.
    fn message_bits(&self, user: usize) -> usize;

    fn encode(&self, user: usize, message: &Self::Message) -> Result<Vec<f64>>;

    /// Joint decoding from the superposition plus noise of variance
    /// `noise_var` per channel use.
    fn decode(&self, y: &[f64], noise_var: f64) -> Result<Decoded<Self::Message>>;

    fn random_message(&self, user: usize, rng: &mut dyn RngCore) -> Self::Message;

    fn bit_errors(&self, user: usize, sent: &Self::Message, got: &Self::Message) -> usize;

    /// Checks a codeword of `user` against the declared constraints.
    fn check_codeword(&self, user: usize, x: &[f64]) -> Result<()> {
        check_len(self.block_len(), x.len())?;
        let amp = self.amplitude(user);
        let peak = peak_amplitude(x);
        if peak > amp * (1.0 + CONSTRAINT_TOL) {
            return Err(SoccError::ConstraintViolation(format!(
                "user {user}: peak amplitude {peak} exceeds {amp}"
            )));
        }
        if self.power_bound() == PowerBound::PerCodeword {
            let p = average_power(x);
            let bound = self.power(user);
            if p > bound * (1.0 + CONSTRAINT_TOL) {
                return Err(SoccError::ConstraintViolation(format!(
                    "user {user}: average power {p} exceeds {bound}"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_user(user: usize, users: usize) -> Result<()> {
    if user < users {
        Ok(())
    } else {
        Err(SoccError::UnknownUser { user, users })
    }
}

pub fn peak_amplitude(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn average_power(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
    }
}

/// Block lengths `n_1, ..., n_L` of the analog computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    lengths: Vec<usize>,
}

impl BlockPartition {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(invalid("lengths", "a partition needs at least one block"));
        }
        if lengths.contains(&0) {
            return Err(invalid("lengths", "block lengths must be positive"));
        }
        Ok(Self { lengths })
    }

    /// `count` blocks of length `len`.
    pub fn uniform(len: usize, count: usize) -> Result<Self> {
        Self::new(vec![len; count])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn num_blocks(&self) -> usize {
        self.lengths.len()
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Length of the base code carried by the wrapper, `n - L`.
    pub fn digital_len(&self) -> usize {
        self.total() - self.num_blocks()
    }

    /// `(start, len)` of every block.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lengths.iter().scan(0usize, |start, &len| {
            let s = *start;
            *start += len;
            Some((s, len))
        })
    }
}

/// Smallest reciprocal integer strictly above `beta`.
pub fn beta_prime(beta: f64) -> Result<f64> {
    reciprocal_index(beta).map(|m| 1.0 / m as f64)
}

/// The `m` in `β' = 1/m`, i.e. the largest integer with `1/m > β`.
pub fn reciprocal_index(beta: f64) -> Result<usize> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid("beta", "must lie in (0, 1)"));
    }
    let q = 1.0 / beta;
    let r = q.round();
    let m = if (q - r).abs() <= 1e-9 * q { r - 1.0 } else { q.floor() };
    Ok(m as usize)
}

/// Partition used by the achievability argument: `L - 1` blocks of length
/// `1/β'` and a last block absorbing the remainder, with `L = ⌊β' n⌋`.
pub fn make_partition(n: usize, beta: f64) -> Result<BlockPartition> {
    let infeasible = |reason: &str| SoccError::InfeasiblePartition {
        n,
        beta,
        reason: reason.to_string(),
    };
    let m = reciprocal_index(beta).map_err(|_| infeasible("beta must lie in (0, 1)"))?;
    if m < 2 {
        return Err(infeasible("beta' = 1 leaves no room for digital symbols"));
    }
    let blocks = n / m;
    if blocks == 0 {
        return Err(infeasible("n is shorter than one block of length 1/beta'"));
    }
    let needed = (beta * n as f64 - 1e-9).ceil().max(1.0) as usize;
    if blocks < needed {
        return Err(infeasible("fewer than beta*n blocks fit"));
    }
    let mut lengths = vec![m; blocks - 1];
    lengths.push(n - (blocks - 1) * m);
    BlockPartition::new(lengths)
}

/// A base code carried on the zero-sum hyperplane of each block.
#[derive(Debug, Clone)]
pub struct WrappedCode<C> {
    base: C,
    partition: BlockPartition,
    maps: Vec<Arc<PlaneMap>>,
}

impl<C: MacCode> WrappedCode<C> {
    pub fn new(base: C, partition: BlockPartition) -> Result<Self> {
        check_len(partition.digital_len(), base.block_len())?;
        let cache = PlaneMapCache::new();
        let maps = partition
            .lengths()
            .iter()
            .map(|&len| cache.get(len))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            base,
            partition,
            maps,
        })
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    /// Largest ∞-norm over the block maps; wrapped peaks are at most this
    /// factor times the base peak.
    pub fn amplitude_factor(&self) -> f64 {
        self.maps
            .iter()
            .map(|m| m.max_row_abs_sum())
            .fold(0.0, f64::max)
    }

    /// Maps a base codeword (length `n - L`) onto the per-block hyperplanes.
    pub fn wrap(&self, base: &[f64]) -> Result<Vec<f64>> {
        check_len(self.partition.digital_len(), base.len())?;
        let mut out = vec![0.0; self.partition.total()];
        let mut src = 0;
        for ((start, len), map) in self.partition.blocks().zip(&self.maps) {
            map.forward_into(&base[src..src + len - 1], &mut out[start..start + len])?;
            src += len - 1;
        }
        Ok(out)
    }

    pub fn wrap_encode(&self, user: usize, message: &C::Message) -> Result<Vec<f64>> {
        let x = self.base.encode(user, message)?;
        self.wrap(&x)
    }

    /// Applies the block adjoints, removing any per-block constant.
    pub fn unwrap_receive(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len(self.partition.total(), y.len())?;
        let mut out = vec![0.0; self.partition.digital_len()];
        let mut dst = 0;
        for ((start, len), map) in self.partition.blocks().zip(&self.maps) {
            map.adjoint_into(&y[start..start + len], &mut out[dst..dst + len - 1])?;
            dst += len - 1;
        }
        Ok(out)
    }
}

impl<C: MacCode> MacCode for WrappedCode<C> {
    type Message = C::Message;

    fn num_users(&self) -> usize {
        self.base.num_users()
    }

    fn block_len(&self) -> usize {
        self.partition.total()
    }

    fn power(&self, user: usize) -> f64 {
        self.base.power(user) * self.partition.digital_len() as f64 / self.partition.total() as f64
    }

    fn amplitude(&self, user: usize) -> f64 {
        self.base.amplitude(user) * self.amplitude_factor()
    }

    fn power_bound(&self) -> PowerBound {
        self.base.power_bound()
    }

    fn rate(&self, user: usize) -> f64 {
        self.base.rate(user) * self.base.block_len() as f64 / self.partition.total() as f64
    }

    fn message_bits(&self, user: usize) -> usize {
        self.base.message_bits(user)
    }

    fn encode(&self, user: usize, message: &Self::Message) -> Result<Vec<f64>> {
        self.wrap_encode(user, message)
    }

    fn decode(&self, y: &[f64], noise_var: f64) -> Result<Decoded<Self::Message>> {
        let inner = self.unwrap_receive(y)?;
        self.base.decode(&inner, noise_var)
    }

    fn random_message(&self, user: usize, rng: &mut dyn RngCore) -> Self::Message {
        self.base.random_message(user, rng)
    }

    fn bit_errors(&self, user: usize, sent: &Self::Message, got: &Self::Message) -> usize {
        self.base.bit_errors(user, sent, got)
    }
}
