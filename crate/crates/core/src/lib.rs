//! Set-direct factorizations `G = X × Y` of finite groups by normal subsets.
//!
//! Groups are explicit multiplication tables ([`GroupTable`]); subsets are bit
//! masks over element indices ([`Subset`]). The [`setdirect`] module holds the
//! verifier and the constructions, [`oracle`] an independent exhaustive search.

pub mod catalog;
pub mod central;
pub mod construct;
pub mod error;
pub mod group;
pub mod input;
pub mod oracle;
pub mod setdirect;
pub mod subset;

pub use central::{CentralDecomposition, ZActionData};
pub use error::{Error, Result};
pub use group::{ClassPartition, GroupTable, Limits, SetProduct};
pub use setdirect::{FactorizationSystem, MainTheoremReport, SetDirectFactorization};
pub use subset::Subset;
