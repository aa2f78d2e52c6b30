//! Weierstrass semigroups of the second Garcia–Stichtenoth tower and bounds
//! on relative generalized Hamming weights of one-point codes built on it.

pub mod asymptotics;
pub mod bound;
pub mod closed;
pub mod error;
pub mod explicit;
pub mod ledger;
pub mod ramp;
pub mod rghw;
pub mod semigroup;
pub mod tower;
pub mod verify;

pub use bound::{BoundKind, BoundValue, Discrepancy, Number};
pub use error::{Error, Result};
pub use rghw::{CodePairSpec, ShiftSet, ZOptions, ZResult};
pub use semigroup::{build_recursive, SemigroupDoc, SemigroupTable};
pub use tower::TowerParams;
