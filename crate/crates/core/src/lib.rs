//! Exact sieved mean values of multiplicative functions, checked against the
//! main terms and error scales of effective mean-value theorems.
//!
//! The crate is organised bottom-up:
//!
//! - [`sieve`]: prime tables, smallest-prime-factor tables, factorization and a
//!   segmented factoring pass for bounds too large to tabulate.
//! - [`funcspec`]: multiplicative and additive functions described by their
//!   values at prime powers, evaluated into [`funcspec::ValueTable`]s, plus the
//!   convolution algebra (cofactors, exponential extensions, block minorants).
//! - [`primesums`]: prime sums `Z(x; f)`, the parameter bundle and the
//!   automated hypothesis checkers.
//! - [`predict`]: truncated Euler products and main-term predictors, compared
//!   against exact summatory values.
//! - [`moments`]: weighted distribution functions of additive functions, their
//!   Gaussian comparison and weighted central moments.
//! - [`cli`]: the configuration-driven experiment runner behind the `meanlab`
//!   binary.

pub mod cli;
pub mod error;
pub mod funcspec;
pub mod moments;
pub mod predict;
pub mod primesums;
pub mod sieve;
pub mod special;
mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
