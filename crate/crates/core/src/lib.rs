//! Construction and measurement of Beurling generalized prime systems with
//! prescribed zeta zeros.
//!
//! The pipeline runs `density` → `prime_sampler` → `semigroup` → `zeta` /
//! `oscillation`; `analysis_kernels` and `sine_polynomial` are standalone.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis_kernels;
pub mod density;
pub mod error;
pub mod numeric;
pub mod oscillation;
pub mod prime_sampler;
pub mod quad;
pub mod semigroup;
pub mod sine_polynomial;
pub mod zeta;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
