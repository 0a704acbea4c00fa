//! Exact ground arithmetic: ℚ, ℚ(i), univariate polynomials and rational
//! functions, and the coordinate ring O(SL₂).

mod field;
mod gauss;
mod poly;
mod ratfunc;
mod sl2;

pub use field::{q_abs, q_frac, q_int, q_parse, q_to_string, serde_q, serde_q_vec, Field, ParseRationalError, Q};
pub use gauss::Gauss;
pub use poly::{Poly, SRingElem};
pub use ratfunc::RatFunc;
pub use sl2::{Mono, SL2Elem};
