//! Exact GF(2) machinery for families of odd intervals on paths and cycles.

pub mod affine;
pub mod checks;
pub mod duality;
pub mod error;
pub mod exact;
pub mod f2;
pub mod families;
pub mod incidence;
pub mod omega;
pub mod order;
pub mod sectors;

pub use error::{Error, Result};
pub use f2::{BitVector, QuotientMap, SubspaceHandle, SymplecticForm};
pub use families::{Family, PhiTable};
pub use incidence::{Case, Interval, Permutation, Setup};
pub use order::{PartialOrder, StepRelation};
