//! Sampling-rate lower bounds for approximate sparsity-pattern recovery.
//!
//! Everything here is `no_std` with `alloc`. IO, the command line, and file
//! formats live in the `srd` companion crate.

#![no_std]
// `num_traits::Float` supplies f64 math without std. When std enters the
// build through dev-dependencies its inherent methods win and the import
// looks unused.
#![allow(unused_imports)]

extern crate alloc;

pub mod bounds;
pub mod distributions;
pub mod error;
pub mod linalg;
pub mod montecarlo;
pub mod ratefun;
pub mod rng;
pub mod runner;
pub mod simulate;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
