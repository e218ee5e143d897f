//! Report documents. Every document carries `schema_version`; readers
//! refuse any other version.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use hk_core::character::{canonical_character, orbit_representatives};
use hk_core::invariants::{closed_form, euler_by_stratification, RigidityReport, SurfaceInvariants};
use hk_core::vanishing::{CertificateKind, VanishingProblem};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("report has schema_version {found:?}, this reader understands {SCHEMA_VERSION}")]
    Version { found: Option<u64> },
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

/// Pretty JSON with keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("report types serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

pub fn read_document<T: DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value.get("schema_version").and_then(|v| v.as_u64());
    if found != Some(SCHEMA_VERSION as u64) {
        return Err(SchemaError::Version { found });
    }
    Ok(serde_json::from_value(value)?)
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub characters: u64,
    pub orbits: u64,
    pub problems: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonVanishingEntry {
    pub key: String,
    pub chi: i64,
    /// `h^1 >= -chi` since `h^2 = 0`.
    pub h1_lower_bound: i64,
    pub characters: u64,
    /// Least member of each orbit of characters with this problem.
    pub orbits: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityDoc {
    pub schema_version: u32,
    pub n: u32,
    pub mode: String,
    pub verdict: String,
    pub totals: Totals,
    pub verdict_tally: BTreeMap<String, u64>,
    pub unresolved_keys: Vec<String>,
    pub nonvanishing: Vec<NonVanishingEntry>,
    pub registry_usage: BTreeMap<String, u64>,
    pub invariants: SurfaceInvariants,
    pub chi_sum: i64,
    pub crosscheck_ok: bool,
    pub registry_digest: String,
    pub timing: Option<Timing>,
}

impl RigidityDoc {
    pub fn build(report: &RigidityReport, registry_digest: &str, timing: Option<Timing>) -> Self {
        let nonvanishing = report
            .nonvanishing()
            .map(|p| {
                let orbits = orbit_representatives(report.n)
                    .into_iter()
                    .filter(|(psi, _)| {
                        VanishingProblem::from_character(psi).map(|q| q.key().canonical() == p.key).unwrap_or(false)
                    })
                    .map(|(psi, _)| canonical_character(&psi).to_string())
                    .collect();
                NonVanishingEntry {
                    key: p.key.to_string(),
                    chi: p.chi,
                    h1_lower_bound: -p.chi,
                    characters: p.characters,
                    orbits,
                }
            })
            .collect();
        let tally = report.tally.iter().map(|(k, v)| (k.name().to_string(), *v)).collect();
        RigidityDoc {
            schema_version: SCHEMA_VERSION,
            n: report.n,
            mode: serde_json::to_value(report.mode)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            verdict: verdict(report).to_string(),
            totals: Totals {
                characters: report.total_characters,
                orbits: report.orbit_count,
                problems: report.distinct_problems as u64,
            },
            verdict_tally: tally,
            unresolved_keys: report.unresolved().map(|p| p.key.to_string()).collect(),
            nonvanishing,
            registry_usage: report.registry_usage.clone(),
            invariants: report.invariants,
            chi_sum: report.chi_sum,
            crosscheck_ok: report.crosscheck_ok,
            registry_digest: registry_digest.to_string(),
            timing,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.verdict.as_str() {
            "rigid" => 0,
            "nonvanishing" => 1,
            _ => 2,
        }
    }
}

fn verdict(report: &RigidityReport) -> &'static str {
    if report.tally[&CertificateKind::Unresolved] > 0 {
        "unresolved"
    } else if report.tally[&CertificateKind::NonVanishing] > 0 {
        "nonvanishing"
    } else {
        "rigid"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityRun {
    pub schema_version: u32,
    pub reports: Vec<RigidityDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsDoc {
    pub schema_version: u32,
    pub n: u32,
    pub k2: i64,
    pub euler_closed: i64,
    pub euler_stratified: i64,
    pub chi_o: i64,
    pub chi_theta: i64,
    pub chi_sum: i64,
    pub euler_ok: bool,
    pub noether_ok: bool,
    pub crosscheck_ok: bool,
}

impl InvariantsDoc {
    pub fn build(n: u32, chi_sum: i64) -> Self {
        let c = closed_form(n);
        let euler_stratified = euler_by_stratification(n);
        InvariantsDoc {
            schema_version: SCHEMA_VERSION,
            n,
            k2: c.k2,
            euler_closed: c.euler,
            euler_stratified,
            chi_o: c.chi_o,
            chi_theta: c.chi_theta,
            chi_sum,
            euler_ok: euler_stratified == c.euler,
            noether_ok: c.noether_holds(),
            crosscheck_ok: chi_sum == c.chi_theta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_mismatch_is_refused() {
        let doc = InvariantsDoc::build(3, 90);
        let text = to_sorted_json(&doc);
        assert_eq!(read_document::<InvariantsDoc>(&text).unwrap(), doc);
        let bumped = text.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(read_document::<InvariantsDoc>(&bumped), Err(SchemaError::Version { found: Some(2) })));
        assert!(matches!(read_document::<InvariantsDoc>("{}"), Err(SchemaError::Version { found: None })));
    }

    #[test]
    fn keys_are_sorted() {
        let text = to_sorted_json(&InvariantsDoc::build(5, 5000));
        let keys: Vec<&str> = text.lines().filter_map(|l| l.trim().strip_prefix('"')?.split('"').next()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(digest(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
