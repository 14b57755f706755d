//! Exact and asymptotic statistics of parts in k-indivisible partitions.
//!
//! A partition is *k-indivisible* when no part is divisible by k. For a
//! modulus t this crate counts, exactly and asymptotically, how the parts
//! of all k-indivisible partitions of n distribute over the residue
//! classes 1..=t, certifies the induced most-common-to-least-common
//! ordering of the residues, and enumerates the distinct orderings that
//! arise as k varies.
//!
//! - [`exact`]: arbitrary-precision part counts and enumeration oracles.
//! - [`interval`]: outward-rounded dyadic interval arithmetic.
//! - [`bernoulli`], [`digamma`]: exact Bernoulli numbers and certified
//!   digamma enclosures at positive rationals.
//! - [`bias`]: the second-order bias functional on residues, certified
//!   comparisons, orderings and the ordering atlas.
//! - [`asymptotics`]: the main-term estimator, exact-to-estimate ratios,
//!   and numeric consistency checks for the generating-function analysis.
//! - [`verify`]: named, reportable verification suites over all of it.

pub mod asymptotics;
pub mod bernoulli;
pub mod bias;
pub mod digamma;
pub mod error;
pub mod exact;
pub mod interval;
pub mod table_io;
#[cfg(test)]
pub(crate) mod test_util;
pub mod verify;

pub use error::{Error, Result};
