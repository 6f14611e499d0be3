//! Signed-weight mixtures of elementary laws and the six mixed
//! hypoexponential-G families built from them.
//!
//! A [`SignedMixture`] is `Σ A_i f_i` with real weights summing to one. The
//! families in [`family`] are laws of `g(S)` where `S` is a sum of
//! exponentials with distinct rates; each is a signed mixture of transformed
//! exponentials. [`estimate`] fits them by maximum likelihood and by the
//! method of moments, and [`verify`] holds the numerical oracles.

// `!(x > 0.0)` is used on purpose so that NaN fails the test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod base;
mod dd;
pub mod error;
pub mod estimate;
pub mod family;
pub mod interval;
pub mod mixture;
pub mod presets;
pub mod rng;
pub mod verify;

pub use base::{BaseDistribution, Kind};
pub use error::{Error, Result};
pub use family::{Family, FamilySpec, HypoexpSpec};
pub use interval::SupportInterval;
pub use mixture::{SignedMixture, ValidationReport};
pub use rng::RandomStream;
