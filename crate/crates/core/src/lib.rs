//! Exact computations on the law of the number of distinct values `K_n`
//! among the first `n` terms of an exchangeable sequence.
//!
//! Everything here works over arbitrary-precision rationals (and, where a
//! square root appears, over a real quadratic field). Floating point is used
//! only by the Monte Carlo sampler.

pub mod combinatorics;
pub mod conjecture;
pub mod eppf;
pub mod error;
pub mod exact_geom;
pub mod k3_region;
pub mod mc;
pub mod paintbox;
pub mod two_param;

pub use error::{Error, Result};
