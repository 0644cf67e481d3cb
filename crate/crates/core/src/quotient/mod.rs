//! Finite level quotients `G / St_d` and twisted conjugacy classes on them.
//!
//! The projection `G → G / St_d` maps twisted classes onto twisted classes,
//! so the class count of the induced automorphism is a lower bound for the
//! Reidemeister number upstairs.

pub mod cache;
mod group;
mod induce;
mod twisted;
mod unionfind;

pub use group::{QuotientGroup, DEFAULT_CAP};
pub use induce::{induce, InducedAutomorphism};
pub use twisted::{
    reidemeister_lower_bounds, twisted_classes, verify_shift_lemma, LowerBound, ShiftReport, TwistedPartition,
};
pub use unionfind::UnionFind;
