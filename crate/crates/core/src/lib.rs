//! Exact linear algebra for mixed Hodge theory on rational homotopy types.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalars`]: ℚ, ℚ(i), polynomials, and O(SL₂) in normal form.
//! * [`linalg`]: dense matrices and subspaces over any exact field.
//! * [`filt`]: filtrations, Rees jumps, purity and weak-Hodge cohomology.
//! * [`mhs`]: mixed Hodge and twistor structures and their 𝒮-splittings.
//! * [`rht`]: graded-commutative algebras, bar constructions, homotopy groups.
//! * [`kahler`]: Kähler packages, homotopy transfer and the monodromy operator.
//! * [`dcoh`]: Deligne and Archimedean cohomology dimensions from Hodge diamonds.
//! * [`cli`]: JSON input formats, fixtures and report generation.

pub mod scalars;
pub mod linalg;
pub mod error;
pub mod filt;
pub mod mhs;
pub mod rht;
pub mod dcoh;
pub mod kahler;
pub mod cli;

pub use error::{Error, Result};
