use std::fmt;

use serde::Serialize;

use super::gvt::{gvt_search, ConditionReport};
use super::problem::{drop_reduce, VanishingProblem};
use super::registry::Registry;
use crate::error::VanishingError;
use crate::lattice::{line_class, pairing};
use crate::lineset::LineSet;

/// Default bound on the number of lines a superset transfer may add.
pub const DEFAULT_SUPERSET_DEPTH: usize = 2;

/// Evidence for the vanishing (or non-vanishing) of `H^1` of one problem.
/// Every variant is stated relative to the problem it was produced for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Certificate {
    Gvt {
        a: LineSet,
        b: LineSet,
        report: ConditionReport,
    },
    /// `removed` lines have `E.Delta = -1`; `inner` is for the smaller log set.
    Drop {
        removed: LineSet,
        inner: Box<Certificate>,
    },
    /// `inner` is for the log set enlarged by `added`.
    Superset {
        added: LineSet,
        slack: i64,
        inner: Box<Certificate>,
    },
    Registry {
        id: String,
    },
    NonVanishing {
        chi: i64,
        h1_lower_bound: i64,
    },
    Unresolved,
}

/// Tally bucket of a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Gvt,
    Drop,
    Superset,
    Registry,
    NonVanishing,
    Unresolved,
}

impl CertificateKind {
    pub const ALL: [CertificateKind; 6] = [
        CertificateKind::Gvt,
        CertificateKind::Drop,
        CertificateKind::Superset,
        CertificateKind::Registry,
        CertificateKind::NonVanishing,
        CertificateKind::Unresolved,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::Gvt => "gvt",
            CertificateKind::Drop => "drop",
            CertificateKind::Superset => "superset",
            CertificateKind::Registry => "registry",
            CertificateKind::NonVanishing => "nonvanishing",
            CertificateKind::Unresolved => "unresolved",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Certificate {
    /// The strongest rule used anywhere in the proof tree: a registry axiom
    /// beats a superset transfer, which beats a drop, which beats a bare
    /// decomposition.
    pub fn kind(&self) -> CertificateKind {
        match self {
            Certificate::Gvt { .. } => CertificateKind::Gvt,
            Certificate::Drop { inner, .. } => inner.kind().max(CertificateKind::Drop),
            Certificate::Superset { inner, .. } => inner.kind().max(CertificateKind::Superset),
            Certificate::Registry { .. } => CertificateKind::Registry,
            Certificate::NonVanishing { .. } => CertificateKind::NonVanishing,
            Certificate::Unresolved => CertificateKind::Unresolved,
        }
    }

    /// Whether the certificate proves `H^1 = 0`.
    pub fn is_vanishing(&self) -> bool {
        match self {
            Certificate::Gvt { .. } | Certificate::Registry { .. } => true,
            Certificate::Drop { inner, .. } | Certificate::Superset { inner, .. } => inner.is_vanishing(),
            Certificate::NonVanishing { .. } | Certificate::Unresolved => false,
        }
    }

    /// Registry ids referenced anywhere in the tree.
    pub fn registry_ids(&self) -> Vec<&str> {
        match self {
            Certificate::Registry { id } => vec![id.as_str()],
            Certificate::Drop { inner, .. } | Certificate::Superset { inner, .. } => inner.registry_ids(),
            _ => Vec::new(),
        }
    }
}

/// `Sum_{E in added} (1 + E.Delta)`, the change of `chi` when `added` joins
/// the log set.
pub fn transfer_slack(prob: &VanishingProblem, added: LineSet) -> i64 {
    added.iter().map(|e| 1 + pairing(line_class(e.index()), prob.twist)).sum()
}

/// Transfers a vanishing certificate for `(T ∪ added, Delta)` down to
/// `(T, Delta)`.
///
/// With `H^2 = 0` on both sides, `h^1(T) = h^0(T) - chi(T) <= h^0(T ∪ added)
/// - chi(T) = chi(T ∪ added) - chi(T) = slack`, so a non-positive slack
/// forces `h^1(T) = 0`.
pub fn superset_transfer(
    prob: &VanishingProblem,
    added: LineSet,
    inner: Certificate,
) -> Result<Certificate, VanishingError> {
    if added.is_empty() {
        return Ok(inner);
    }
    if !added.is_disjoint(prob.logset) {
        return Err(VanishingError::TransferShape(format!("added lines {added} meet the log set {}", prob.logset)));
    }
    if !prob.h2_zero {
        return Err(VanishingError::TransferShape("H^2 = 0 is not known for this problem".into()));
    }
    if !inner.is_vanishing() {
        return Err(VanishingError::TransferShape("inner certificate does not prove vanishing".into()));
    }
    let slack = transfer_slack(prob, added);
    if slack > 0 {
        return Err(VanishingError::TransferInvalid { slack });
    }
    Ok(Certificate::Superset { added, slack, inner: Box::new(inner) })
}

/// Settings of the proof pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProveConfig {
    /// Largest number of lines a superset transfer may add in total.
    pub depth_limit: usize,
    /// After a failed search on the dropped problem, search the original
    /// one too. Dropping can remove lines that a decomposition needs in `B`.
    pub retry_undropped: bool,
}

impl Default for ProveConfig {
    fn default() -> Self {
        ProveConfig { depth_limit: DEFAULT_SUPERSET_DEPTH, retry_undropped: false }
    }
}

/// Runs the proof pipeline: non-vanishing from `chi < 0`, then drop,
/// decomposition search, registry lookup and superset transfers of at most
/// `depth_limit` lines.
pub fn prove(prob: &VanishingProblem, registry: &Registry, depth_limit: usize) -> Certificate {
    prove_with(prob, registry, &ProveConfig { depth_limit, ..ProveConfig::default() })
}

pub fn prove_with(prob: &VanishingProblem, registry: &Registry, config: &ProveConfig) -> Certificate {
    let chi = prob.chi();
    if chi < 0 && prob.h2_zero {
        return Certificate::NonVanishing { chi, h1_lower_bound: -chi };
    }
    let (reduced, removed) = drop_reduce(prob);
    if let Some(w) = gvt_search(&reduced) {
        return wrap_drop(removed, Certificate::Gvt { a: w.a, b: w.b, report: w.report });
    }
    if config.retry_undropped && !removed.is_empty() {
        if let Some(w) = gvt_search(prob) {
            return Certificate::Gvt { a: w.a, b: w.b, report: w.report };
        }
    }
    let inner = prove_reduced(&reduced, registry, config);
    if inner.is_vanishing() {
        wrap_drop(removed, inner)
    } else {
        inner
    }
}

fn wrap_drop(removed: LineSet, inner: Certificate) -> Certificate {
    if removed.is_empty() {
        inner
    } else {
        Certificate::Drop { removed, inner: Box::new(inner) }
    }
}

fn prove_reduced(prob: &VanishingProblem, registry: &Registry, config: &ProveConfig) -> Certificate {
    if let Some(entry) = registry.lookup(prob) {
        return Certificate::Registry { id: entry.id.clone() };
    }
    if !prob.h2_zero {
        return Certificate::Unresolved;
    }
    let outside = prob.logset.complement();
    for size in 1..=config.depth_limit {
        for added in outside.subsets().filter(|s| s.len() == size) {
            if transfer_slack(prob, added) > 0 {
                continue;
            }
            let bigger = VanishingProblem { logset: prob.logset.union(added), ..*prob };
            let inner_config = ProveConfig { depth_limit: config.depth_limit - size, ..*config };
            let inner = prove_with(&bigger, registry, &inner_config);
            if let Ok(cert) = superset_transfer(prob, added, inner) {
                return cert;
            }
        }
    }
    Certificate::Unresolved
}
