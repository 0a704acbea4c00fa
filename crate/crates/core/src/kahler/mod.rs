//! Kähler packages over ℚ, the twisted complex over O(SL₂), homotopy
//! transfer along the coderivation pipeline, and the monodromy of the
//! resulting mixed Hodge structure on the homotopy groups.

pub mod coder;
pub mod fixtures;
pub mod monodromy;
pub mod package;
pub mod twisted;

pub use coder::{Coalgebra, CoderivationPipeline, LinOp, SlTensor, Transfer};
pub use monodromy::{monodromy, pi4_structure, restrict_to_s, AlphaComponent, MonodromyResult, Pi4Structure, SRestriction};
pub use package::{green, two_types_family, two_types_holds, validate_package, Check, KahlerPackage, PackageReport};
pub use twisted::{formality_zigzag, formality_zigzag_at, SlOp, TwistedComplex, ZigzagPoint, ZigzagReport};
