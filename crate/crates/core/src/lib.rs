//! Numerical tools for the Dirichlet divisor problem: exact divisor sums and the
//! error term Δ(x), smoothed sawtooth sums, shifted hyperbolas, Diophantine
//! approximation, oscillatory integrals and Parseval mean values.

// NaN-rejecting range checks are written as !(a < b) on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod approx;
pub mod dd;
pub mod harness;
pub mod divisor;
pub mod error;
pub mod mean_value;
pub mod osc;
pub mod quad;
pub mod rational;
pub mod sawtooth;
pub mod shift;

pub use error::{Error, Result};
pub use rational::Rational;
