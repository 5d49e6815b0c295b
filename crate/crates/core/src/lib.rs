//! Dynamic parameter control for discrete black-box optimization: problems,
//! variation operators, parameter controllers, run loops, exact oracles and an
//! experiment harness.

pub mod algorithms;
pub mod controllers;
pub mod error;
pub mod genome;
pub mod harness;
pub mod operators;
pub mod oracles;
pub mod problems;
pub mod repro;
pub mod rng;

pub use error::{Error, Result};
