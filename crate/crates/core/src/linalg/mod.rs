//! Exact dense and sparse linear algebra over any [`Field`](crate::scalars::Field).

mod dense;
mod sparse;
mod subspace;

pub use dense::{Matrix, Rref};
pub use sparse::{sparse_axpy, sparse_rank, SparseEchelon, SparseVec};
pub use subspace::{unit, Subspace};
