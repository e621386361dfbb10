//! Exact expression algebra: Gaussian-rational scalars and exponential
//! polynomials closed under `+`, `×`, `∂`, complex shifts and evaluation.

mod exppoly;
pub(crate) mod parse;
mod scalar;
mod varset;

pub use exppoly::{ExpPoly, Monomial};
pub use parse::{parse_exppoly, parse_scalar};
pub use scalar::ExactScalar;
pub use varset::VarSet;
