//! Gaussian-state modular theory at finite mode truncation.
//!
//! The crate builds polarisation operators `R` and their Hermitian extension
//! `Σ = iR` for Gaussian states of a (pre-)symplectic space, derives modular
//! operators and Hamiltonians, evaluates the quasi-equivalence quantities of
//! perturbed states, and checks the accompanying Schatten-norm estimates.
//! The `scalarfield` module specialises everything to a free scalar field on
//! a circle or torus, where the thermal state gives closed-form oracles.

pub mod error;
pub mod gaussian;
pub mod matio;
pub mod matops;
pub mod modular;
pub mod quasiequiv;
pub mod random;
pub mod scalarfield;

pub use error::{Error, Result};
pub use gaussian::{
    domination_margin, one_particle_map, perturb, polarisation_canonical, two_point, CanonicalPolarisation,
    GaussianStateForm, Perturbation, PositivityClass, PreSymplecticSpace,
};
pub use matops::{DenseMatrix, RealMatrix, SchattenP};
pub use quasiequiv::{InequalityReport, Relation};

