//! Constructive lower bounds for Reidemeister numbers.

mod alpha;
mod certificate;
mod greedy;
mod kelements;
mod locnormal;
pub mod search;
mod verify;

pub use alpha::{construct_alpha, preferred_path, PathStabilizer};
pub use certificate::{
    binary_certificate, locally_normal_certificate, strongly_saturated_certificate, Certificate, CertificateKind,
    CertifyOptions, Entry, Separation, CERTIFICATE_SCHEMA,
};
pub use greedy::{
    check_assumption, construct_ghat, find_strong_witnesses, greedy_rounds, is_strong_witness, GreedyStep, GreedyTrace,
    StrongWitness, StrongWitnesses,
};
pub use kelements::{construct_k, construct_k_family, fixed_switch_counts, switch_condition};
pub use locnormal::{
    check_local_normality, compute_wbi, find_rigid_witness, level_orbits, locally_normal_step, measure_wbi,
    scan_symmetric, separation_level, wbi_table, LocalNormality, LocalStep, RigidWitness, SymmetricScan, WbiReport,
    WbiTable,
};
pub use search::{Budget, SearchStats};
pub use verify::{verify_certificate, Verdict};
