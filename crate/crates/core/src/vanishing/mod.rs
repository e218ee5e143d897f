//! Deciding `H^1 = 0` for twisted logarithmic sheaves on `Y`.

mod certificate;
mod checker;
mod gvt;
mod problem;
mod registry;

pub use certificate::{
    prove, prove_with, superset_transfer, transfer_slack, Certificate, CertificateKind, ProveConfig,
    DEFAULT_SUPERSET_DEPTH,
};
pub use checker::Checker;
pub use gvt::{gvt_check, gvt_search, ConditionReport, GvtWitness};
pub use problem::{chi_log, drop_reduce, ProblemKey, VanishingProblem, BLOWN_UP_POINTS};
pub use registry::{entry_logset, regenerate, Registry, RegistryEntry};
