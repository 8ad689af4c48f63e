//! Small random antipodal codebooks with brute-force joint ML decoding.
//!
//! Useful as an arbitrary multi-user base code; every codeword entry is
//! `±√P_k`, so power and amplitude bounds hold per codeword.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_user, Decoded, MacCode, PowerBound};
use crate::error::{check_len, invalid, Result, SoccError};

/// Largest joint message space searched by the decoder.
pub const MAX_JOINT_MESSAGES: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct RandomCodebookMac {
    len: usize,
    powers: Vec<f64>,
    codebooks: Vec<Vec<Vec<f64>>>,
}

impl RandomCodebookMac {
    pub fn new(sizes: &[usize], len: usize, powers: &[f64], seed: u64) -> Result<Self> {
        check_len(sizes.len(), powers.len())?;
        if sizes.is_empty() {
            return Err(invalid("sizes", "need at least one user"));
        }
        if len == 0 {
            return Err(invalid("len", "block length must be positive"));
        }
        if sizes.contains(&0) {
            return Err(invalid("sizes", "every user needs at least one message"));
        }
        if powers.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
            return Err(invalid("powers", "must be positive and finite"));
        }
        let joint = sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .filter(|&j| j <= MAX_JOINT_MESSAGES);
        if joint.is_none() {
            return Err(invalid("sizes", "joint message space too large for ML search"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let codebooks = sizes
            .iter()
            .zip(powers)
            .map(|(&size, &p)| {
                let a = p.sqrt();
                (0..size)
                    .map(|_| {
                        (0..len)
                            .map(|_| if rng.random::<bool>() { a } else { -a })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            len,
            powers: powers.to_vec(),
            codebooks,
        })
    }

    pub fn size(&self, user: usize) -> usize {
        self.codebooks[user].len()
    }
}

impl MacCode for RandomCodebookMac {
    type Message = usize;

    fn num_users(&self) -> usize {
        self.codebooks.len()
    }

    fn block_len(&self) -> usize {
        self.len
    }

    fn power(&self, user: usize) -> f64 {
        self.powers[user]
    }

    fn amplitude(&self, user: usize) -> f64 {
        self.powers[user].sqrt()
    }

    fn power_bound(&self) -> PowerBound {
        PowerBound::PerCodeword
    }

    fn rate(&self, user: usize) -> f64 {
        (self.size(user) as f64).ln() / self.len as f64
    }

    fn message_bits(&self, user: usize) -> usize {
        usize::BITS as usize - (self.size(user) - 1).leading_zeros() as usize
    }

    fn encode(&self, user: usize, message: &usize) -> Result<Vec<f64>> {
        check_user(user, self.num_users())?;
        self.codebooks[user]
            .get(*message)
            .cloned()
            .ok_or_else(|| SoccError::MessageOutOfRange {
                user,
                reason: format!("index {message} but codebook has {}", self.size(user)),
            })
    }

    fn decode(&self, y: &[f64], _noise_var: f64) -> Result<Decoded<usize>> {
        check_len(self.len, y.len())?;
        let users = self.num_users();
        let mut idx = vec![0usize; users];
        let mut best = (f64::INFINITY, idx.clone());
        loop {
            let dist: f64 = (0..self.len)
                .map(|i| {
                    let s: f64 = (0..users).map(|k| self.codebooks[k][idx[k]][i]).sum();
                    (y[i] - s).powi(2)
                })
                .sum();
            if dist < best.0 {
                best = (dist, idx.clone());
            }
            let mut k = 0;
            loop {
                if k == users {
                    return Ok(Decoded {
                        messages: best.1,
                        converged: true,
                    });
                }
                idx[k] += 1;
                if idx[k] < self.size(k) {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn random_message(&self, user: usize, rng: &mut dyn RngCore) -> usize {
        rng.random_range(0..self.size(user))
    }

    fn bit_errors(&self, _user: usize, sent: &usize, got: &usize) -> usize {
        (sent ^ got).count_ones() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_joint_decoding() {
        let code = RandomCodebookMac::new(&[4, 3], 12, &[1.0, 2.0], 8).unwrap();
        for a in 0..4 {
            for b in 0..3 {
                let x = code.encode(0, &a).unwrap();
                let z = code.encode(1, &b).unwrap();
                code.check_codeword(0, &x).unwrap();
                let y: Vec<f64> = x.iter().zip(&z).map(|(p, q)| p + q).collect();
                let d = code.decode(&y, 0.1).unwrap();
                assert_eq!(d.messages, vec![a, b]);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(RandomCodebookMac::new(&[4], 0, &[1.0], 0).is_err());
        assert!(RandomCodebookMac::new(&[0], 4, &[1.0], 0).is_err());
        assert!(RandomCodebookMac::new(&[4], 4, &[1.0, 2.0], 0).is_err());
        assert!(RandomCodebookMac::new(&[1 << 11, 1 << 11], 4, &[1.0, 1.0], 0).is_err());
        let code = RandomCodebookMac::new(&[4], 4, &[1.0], 0).unwrap();
        assert!(code.encode(0, &4).is_err());
        assert!(code.encode(1, &0).is_err());
        assert_eq!(code.message_bits(0), 2);
    }
}
