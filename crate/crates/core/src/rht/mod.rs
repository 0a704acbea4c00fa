//! Rational homotopy of finite graded-commutative algebras: the bar
//! construction as a free Lie model, homotopy groups with their weight and
//! Hodge gradings, Whitehead products, the Hurewicz map, the
//! Chevalley–Eilenberg functor, and Maurer–Cartan elements with their gauge
//! action.

pub mod algebra;
pub mod bar;
pub mod dgla;
pub mod lie;
pub mod tensor;

pub use algebra::{fixtures, validate_algebra, AlgebraReport, BasisElement, GCAlgebra};
pub use bar::{
    bar_construction, bar_truncated, homotopy_groups, pi3_formula, BarGenerator, DegreeCounts, FreeLieCoalgTrunc,
    Grading, HomotopyGroups, Pi3Formula, PiClass, PiGroup,
};
pub use dgla::{bch, chevalley_eilenberg, free_nilpotent, gauge_act, mc_check, NilpotentDGLA};
pub use lie::{colie_basis, CoLieBasis, FreeLie};
pub use tensor::Tensor;

#[cfg(test)]
mod tests;
