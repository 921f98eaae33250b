//! Shape-constrained estimation: least concave majorants, Grenander-type
//! estimators, smoothed monotone estimators, and a seeded Monte Carlo engine
//! for measuring how fast `sup |F̂_n - F_n|` shrinks.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hull;
pub mod monotone;
pub mod naive;
pub mod ratelab;

pub use error::{Error, Result};
