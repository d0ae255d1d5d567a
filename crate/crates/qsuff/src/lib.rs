//! Binary quantum state discrimination restricted to a matrix subalgebra.
//!
//! Given two invertible density matrices and a unital *-subalgebra `M0` of
//! the d×d complex matrices, this crate decides whether restricting
//! measurements to `M0` loses discriminating power:
//!
//! * [`sufficiency::check_sufficiency`] tests whether the restriction
//!   preserves relative entropy (equivalently, admits a recovery channel),
//!   through several provably equivalent criteria that must agree.
//! * [`sufficiency::check_2sufficiency`] tests the stronger property that
//!   every binary Bayes testing problem is solved as well inside `M0` as on
//!   the full algebra, via Neyman–Pearson projection comparisons on a
//!   critical grid plus error curves.
//! * [`geometry`] carries the state-dependent conditional expectation,
//!   entropies and the Chernoff error exponent; [`testing`] the optimal
//!   tests, error pairs and Monte-Carlo simulation; [`hermitian`] the
//!   underlying spectral machinery.
//!
//! All logarithms are natural; entropies and exponents are in nats.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod analysis;
pub mod error;
pub mod geometry;
pub mod hermitian;
mod opt;
pub mod problem;
pub mod sufficiency;
pub mod testing;

pub use error::{Error, Result};
pub use hermitian::{CMatrix, Complex64};
