//! Exact symbolic toolkit for Kirillov-orbit quantization of aff(ℝ), aff(ℂ)
//! and sl(2,ℝ): Darboux charts, the Moyal ⋆-product, ℓ̂-type differential
//! operators and the K-theory/periodic-cyclic-homology comparison.

pub mod error;
pub mod exec;
pub mod homology;
pub mod liealg;
pub mod moyal;
pub mod operators;
pub mod orbits;
pub mod symalg;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use liealg::{AlgElement, AlgebraName, DualVector, LieAlgebra};
pub use symalg::{ExactScalar, ExpPoly, Monomial, VarSet};
