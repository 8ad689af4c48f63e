//! Simultaneous over-the-air computation and communication (SOCC) over
//! Gaussian multiple-access channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`zerosum`] builds the orthonormal maps onto the zero-sum hyperplane,
//! * [`codec`] holds digital MAC codes and the zero-sum wrapper,
//! * [`channel`] realises the additive, fading and impulsive channels,
//! * [`socc`] runs the hybrid analog/digital scheme,
//! * [`bounds`] evaluates rate and error bounds,
//! * [`experiments`] drives reproducible Monte Carlo sweeps.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
pub mod codec;
pub mod error;
pub mod experiments;
pub mod rng;
pub mod socc;
pub mod zerosum;

pub use error::{Result, SoccError};
