//! Analytics for RIS-aided joint secrecy and covert communication (JSACC) over
//! Nakagami-m fading: closed-form outage, ergodic-rate, detection-error and
//! security-rate metrics, their high-SNR asymptotes, and a Monte Carlo
//! simulator to check them against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel_stats;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
