//! Exact-arithmetic toolkit for inhomogeneous Diophantine approximation.
//!
//! The crate computes with continued fractions and Ostrowski numeration to
//! evaluate distances `||n*alpha - gamma||`, enumerate digit-constrained gap
//! sets, count solutions of `||n*alpha - gamma|| < eps`, and bound the sums
//! of reciprocals of fractional parts
//!
//! ```text
//! S_N(alpha, gamma) = sum_{n<=N} 1/(n ||n alpha - gamma||)
//! R_N(alpha, gamma) = sum_{n<=N} 1/||n alpha - gamma||
//! ```
//!
//! against explicit two-sided estimates, all in certified interval or exact
//! quadratic-field arithmetic. Every inequality the crate reports as holding
//! was decided by an enclosure, never by floating point.
//!
//! See the `examples/` directory for one runnable walkthrough per subsystem,
//! and the thin `dioph` binary for the batch/reporting interface.

pub mod cli;
pub mod constructions;
pub mod contfrac;
pub mod counting;
pub mod dyadic;
pub mod gapsets;
pub mod error;
pub mod normeval;
pub mod ostrowski;
pub mod psi;
pub mod realnum;
pub mod sums;
pub mod surd;
pub mod value;

pub use error::{Error, Result};
