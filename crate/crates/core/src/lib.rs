//! Exact computation of logarithmic vector fields on reflection
//! multi-arrangements.
//!
//! The algebra is generic over a [`scalar::Field`]; the aliases at the crate
//! root fix it to [`CycNum`], which is what the group catalog uses.

pub mod derivation;
pub mod error;
pub mod group;
pub mod hodge;
pub mod multiarr;
pub mod poly;
pub mod scalar;
pub mod universal;

pub use error::{Error, Result};
pub use scalar::{CycNum, Field, Rat};

pub type Poly = poly::Poly<CycNum>;
pub type RatFunc = poly::RatFunc<CycNum>;
pub type LinForm = poly::LinForm<CycNum>;
pub type VField = derivation::VField<CycNum>;
pub type GroupData = group::GroupData<CycNum>;
pub type Mult = multiarr::Mult<CycNum>;
pub type BasisCert = multiarr::BasisCert<CycNum>;
pub type FlatFrame = hodge::FlatFrame<CycNum>;
