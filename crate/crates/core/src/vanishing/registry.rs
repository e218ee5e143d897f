//! Vanishing results taken as axioms.
//!
//! For `n = 5` the covering is a compact ball quotient and hence
//! infinitesimally rigid, so `H^1` of every eigensheaf vanishes. Problems
//! that occur at `n = 5` and that the combinatorial rules cannot close are
//! recorded here; since the sheaf only depends on `(T, Delta)`, an entry
//! settles the same problem for every other `n`.
//!
//! File format: one JSON object per line with the fields `id`, `logset`
//! (list of index pairs), `twist` (`[l, e1, e2, e3, e4]`) and
//! `justification`. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::certificate::{prove_with, ProveConfig};
use super::problem::{drop_reduce, ProblemKey, VanishingProblem};
use crate::character::{geometry_of, Character};
use crate::error::RegistryError;
use crate::lattice::{DivisorClass, LinePair};
use crate::lineset::LineSet;

const BUILTIN: &str = include_str!("../../data/registry.jsonl");

const HEADER: &str = "\
# Eigensheaf problems (T, Delta) certified by the rigidity of the n = 5 ball quotient.
# One JSON object per line: id, logset (index pairs), twist [l, e1, e2, e3, e4], justification.
# Generated by `hkrigid registry`; lookups are modulo the symmetric group and after dropping
# log lines with E.Delta = -1.
";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub id: String,
    pub logset: Vec<[u8; 2]>,
    pub twist: [i64; 5],
    pub justification: String,
}

impl RegistryEntry {
    pub fn problem_key(&self) -> ProblemKey {
        let logset = self.logset.iter().map(|&[i, j]| LinePair::of(i, j)).collect();
        ProblemKey { logset, twist: DivisorClass(self.twist) }
    }

    /// Key under which the entry is found: the canonical form of the entry
    /// after dropping.
    pub fn lookup_key(&self) -> ProblemKey {
        let (reduced, _) = drop_reduce(&self.problem_key().problem(true));
        reduced.key().canonical()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
    index: BTreeMap<ProblemKey, usize>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// The registry shipped with the library.
    pub fn builtin() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| Registry::parse(BUILTIN).expect("shipped registry parses"))
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
    }

    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        Registry::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, RegistryError> {
        let mut entries = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry: RegistryEntry =
                serde_json::from_str(line).map_err(|e| RegistryError::Parse { line: k + 1, msg: e.to_string() })?;
            for &[i, j] in &entry.logset {
                if LinePair::new(i, j).is_none() {
                    return Err(RegistryError::Parse { line: k + 1, msg: format!("invalid line [{i},{j}]") });
                }
            }
            entries.push(entry);
        }
        Registry::from_entries(entries)
    }

    pub fn from_entries(entries: Vec<RegistryEntry>) -> Result<Self, RegistryError> {
        let mut index = BTreeMap::new();
        for (k, e) in entries.iter().enumerate() {
            if let Some(prev) = index.insert(e.lookup_key(), k) {
                return Err(RegistryError::Duplicate { first: entries[prev].id.clone(), second: e.id.clone() });
            }
        }
        Ok(Registry { entries, index })
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Entry whose dropped canonical form equals that of `prob`.
    pub fn lookup(&self, prob: &VanishingProblem) -> Option<&RegistryEntry> {
        if self.entries.is_empty() {
            return None;
        }
        let (reduced, _) = drop_reduce(prob);
        self.index.get(&reduced.key().canonical()).map(|&k| &self.entries[k])
    }

    /// Whether the problem lies in the symmetric-group closure of the
    /// registry after dropping.
    pub fn covers(&self, prob: &VanishingProblem) -> bool {
        self.lookup(prob).is_some()
    }

    /// Canonical serialization: header, then one entry per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from(HEADER);
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entry serializes"));
            out.push('\n');
        }
        out
    }
}

/// Rebuilds the registry from the `n = 5` characters.
///
/// Every character whose problem stays unresolved without a registry
/// contributes its problem; problems with equal dropped canonical forms are
/// represented by the least canonical original. Entries are sorted by log
/// set and twist and numbered `R01, R02, ..`.
pub fn regenerate(config: &ProveConfig) -> Registry {
    const N: u32 = 5;
    let empty = Registry::empty();
    let mut chosen: BTreeMap<ProblemKey, (ProblemKey, Character)> = BTreeMap::new();
    let mut verdicts: BTreeMap<ProblemKey, bool> = BTreeMap::new();
    for code in 0..Character::count(N) {
        let psi = Character::from_code(N, code);
        let prob = VanishingProblem::from_character(&psi).expect("n = 5 characters are consistent");
        let original = prob.key().canonical();
        let resolved = *verdicts
            .entry(original)
            .or_insert_with(|| prove_with(&original.problem(prob.h2_zero), &empty, config).is_vanishing());
        if resolved {
            continue;
        }
        let reduced = drop_reduce(&prob).0.key().canonical();
        let slot = chosen.entry(reduced).or_insert((original, psi));
        if (original, psi) < *slot {
            *slot = (original, psi);
        }
    }

    let mut entries: Vec<RegistryEntry> = chosen
        .into_values()
        .map(|(key, psi)| {
            let case = geometry_of(&psi).map(|g| g.case_id.to_string()).unwrap_or_default();
            RegistryEntry {
                id: String::new(),
                logset: key.logset.pairs(),
                twist: key.twist.0,
                justification: format!(
                    "occurs for n=5 at psi={:?}, case {case}; HK(5) is a compact ball quotient, hence infinitesimally rigid",
                    psi.residues()
                ),
            }
        })
        .collect();
    entries.sort_by(|x, y| (&x.logset, x.twist).cmp(&(&y.logset, y.twist)));
    let width = entries.len().to_string().len().max(2);
    for (k, e) in entries.iter_mut().enumerate() {
        e.id = format!("R{:0width$}", k + 1);
    }
    Registry::from_entries(entries).expect("regenerated keys are distinct")
}

/// Log set of an entry, as a [`LineSet`].
pub fn entry_logset(e: &RegistryEntry) -> LineSet {
    e.problem_key().logset
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(u8, u8)]) -> LineSet {
        pairs.iter().map(|&(i, j)| LinePair::of(i, j)).collect()
    }

    #[test]
    fn shipped_registry_covers_the_conic_section_case() {
        let reg = Registry::builtin();
        assert!(!reg.is_empty());
        // all lines but E23, E15 with Delta = -2L + E1 + E2 + E3
        let t = LineSet::FULL.difference(set(&[(2, 3), (1, 5)]));
        let twist = DivisorClass::new(-2, [1, 1, 1, 0]);
        let prob = VanishingProblem::new(t, twist, true);
        let entry = reg.lookup(&prob).expect("covered");
        let (dropped, removed) = drop_reduce(&prob);
        assert!(!removed.is_empty());
        assert_eq!(reg.lookup(&dropped).map(|e| &e.id), Some(&entry.id));
        assert!(reg.lookup(&VanishingProblem::new(t, DivisorClass::ZERO, true)).is_none());
    }

    #[test]
    fn regeneration_matches_shipped_file() {
        assert_eq!(regenerate(&ProveConfig::default()).to_text(), Registry::builtin_text());
    }

    #[test]
    fn retrying_undropped_search_empties_the_registry() {
        let config = ProveConfig { retry_undropped: true, ..ProveConfig::default() };
        assert!(regenerate(&config).is_empty());
    }

    #[test]
    fn parse_roundtrip() {
        let reg = Registry::builtin();
        let again = Registry::parse(&reg.to_text()).unwrap();
        assert_eq!(again.entries(), reg.entries());
        assert_eq!(reg.to_text(), Registry::builtin_text());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Registry::parse("{nope"), Err(RegistryError::Parse { line: 1, .. })));
        let bad_pair = r#"{"id":"X","logset":[[1,1]],"twist":[0,0,0,0,0],"justification":""}"#;
        assert!(matches!(Registry::parse(bad_pair), Err(RegistryError::Parse { .. })));
        let a = r#"{"id":"A","logset":[[1,2]],"twist":[0,0,0,0,0],"justification":""}"#;
        let b = r#"{"id":"B","logset":[[4,5]],"twist":[0,0,0,0,0],"justification":""}"#;
        assert!(matches!(Registry::parse(&format!("{a}\n# c\n{b}\n")), Err(RegistryError::Duplicate { .. })));
    }
}
