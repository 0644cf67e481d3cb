//! Exact computation in self-similar groups acting on spherically symmetric
//! rooted trees: portraits, wreath-recursion presentations, finite level
//! quotients with their twisted conjugacy classes, and certificates bounding
//! Reidemeister numbers from below.

pub mod constructions;
pub mod error;
pub mod quotient;
pub mod selfsim;
pub mod tree;

pub use constructions::{Budget, Certificate, CertificateKind, CertifyOptions, Verdict};
pub use error::{Error, ErrorClass, Result};
pub use quotient::{InducedAutomorphism, QuotientGroup, TwistedPartition};
pub use selfsim::{AutomorphismSpec, Presentation, Word};
pub use tree::{Perm, PermGroup, Portrait, TreeSignature, Vertex};
