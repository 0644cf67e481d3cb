//! Spherically symmetric rooted trees and their finite-depth automorphisms.

mod perm;
mod permgroup;
mod portrait;
mod signature;
mod vertex;

pub use perm::{cycle_type_of, Perm};
pub use permgroup::{normal_subgroups_of_symmetric, PermGroup};
pub use portrait::Portrait;
pub(crate) use portrait::{compose_labels, inverse_labels};
pub use signature::TreeSignature;
pub use vertex::Vertex;
