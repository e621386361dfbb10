//! Differential-shift operators, partial Fourier conjugation, the ℓ̂
//! operators of each algebra and grid-level evolution.

pub(crate) mod diffop;

pub use diffop::{DiffOperator, OpKey};
pub mod fourier;
pub mod grid;
pub mod hat;
pub mod rep;

pub use fourier::fourier_conjugate;
pub use grid::{apply_grid, evolve, Axis, Evolution, GridField, GridOperator};
pub use hat::{compare_printed, ComparisonStatus, HomomorphismReport, PrintedComparison, hat_ell, hat_ell_branch, printed_hat_ell, restrict_to_combination, verify_homomorphism};
pub use rep::{affr_evolution_check, oplus, rep_action_affc, rep_action_affr, EvolutionReport};
