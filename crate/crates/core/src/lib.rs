//! Block designs, the binary self-orthogonal codes their incidence matrices
//! generate, and the searches that connect the two.

pub mod canon;
pub mod catalog;
pub mod design;
pub mod error;
pub mod gf2;
pub mod lincode;
pub mod records;
pub mod search;

pub use canon::{are_equivalent, code_canonical, BipartiteIncidence, CanonicalForm};
pub use design::{Design, DesignParams, PointCode};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, SpanOrder};
pub use lincode::{LinearCode, WeightDistribution};
