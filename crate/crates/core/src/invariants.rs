//! Numerical invariants of `S = HK(n)` and the per-`n` rigidity verdict.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::character::{orbit_representatives, Character};
use crate::error::CharacterError;
use crate::lattice::{line_class, pairing};
use crate::vanishing::{
    chi_log, prove_with, Certificate, CertificateKind, ProblemKey, ProveConfig, Registry, VanishingProblem,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub n: u32,
    /// `K_S^2`.
    pub k2: i64,
    /// Topological Euler number `e(S)`.
    pub euler: i64,
    /// `chi(O_S)`.
    pub chi_o: i64,
    /// `chi(Theta_S) = 2 K^2 - 10 chi(O_S)`.
    pub chi_theta: i64,
}

impl SurfaceInvariants {
    pub fn noether_holds(&self) -> bool {
        12 * self.chi_o == self.k2 + self.euler
    }
}

/// Closed formulas `K^2 = 5 (n-2)^2 n^3` and `e = n^3 (2n^2 - 10n + 15)`.
pub fn closed_form(n: u32) -> SurfaceInvariants {
    let m = n as i64;
    let k2 = 5 * (m - 2).pow(2) * m.pow(3);
    let euler = m.pow(3) * (2 * m * m - 10 * m + 15);
    let chi_o = (k2 + euler) / 12;
    SurfaceInvariants { n, k2, euler, chi_o, chi_theta: 2 * k2 - 10 * chi_o }
}

/// `e(S)` from the stratification of `Y` by the arrangement: the open
/// complement has fibre `n^5`, points on exactly one line have fibre `n^4`,
/// and the nodes have fibre `n^3`.
pub fn euler_by_stratification(n: u32) -> i64 {
    let m = n as i64;
    let lines = 10i64;
    let mut nodes = 0i64;
    let mut nodes_on_line = [0i64; 10];
    for a in 0..10 {
        for b in a + 1..10 {
            if pairing(line_class(a), line_class(b)) == 1 {
                nodes += 1;
                nodes_on_line[a] += 1;
                nodes_on_line[b] += 1;
            }
        }
    }
    // Y is the plane blown up in four points
    let euler_y = 3 + 4;
    let euler_lines_open: i64 = nodes_on_line.iter().map(|k| 2 - k).sum();
    let euler_d = 2 * lines - nodes;
    let euler_open = euler_y - euler_d;
    euler_open * m.pow(5) + euler_lines_open * m.pow(4) + nodes * m.pow(3)
}

/// `Sum_psi chi(T_psi, Delta_psi)` over all `n^5` characters.
pub fn chi_sum(n: u32) -> Result<i64, CharacterError> {
    (0..Character::count(n))
        .into_par_iter()
        .map(|code| {
            let p = VanishingProblem::from_character(&Character::from_code(n, code))?;
            Ok(chi_log(p.logset, p.twist))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Whether the eigensheaf Euler characteristics add up to `chi(Theta_S)`.
pub fn chi_crosscheck(n: u32) -> Result<bool, CharacterError> {
    Ok(chi_sum(n)? == closed_form(n).chi_theta)
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("rigidity needs n >= 3, got {0}")]
    Modulus(u32),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// One representative per orbit of the symmetric group, weighted by the
    /// orbit size.
    #[default]
    Orbits,
    /// Every character.
    Full,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RigidityOptions {
    pub mode: EnumerationMode,
    pub prove: ProveConfig,
}

/// One distinct problem of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemOutcome {
    pub key: ProblemKey,
    pub chi: i64,
    pub kind: CertificateKind,
    /// Number of characters whose problem has this canonical form.
    pub characters: u64,
    /// Least such character.
    pub representative: Character,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub n: u32,
    pub mode: EnumerationMode,
    pub total_characters: u64,
    pub orbit_count: u64,
    pub distinct_problems: usize,
    /// Characters per certificate kind; sums to `n^5`.
    pub tally: BTreeMap<CertificateKind, u64>,
    /// Characters per registry entry used.
    pub registry_usage: BTreeMap<String, u64>,
    pub rigid: bool,
    pub chi_sum: i64,
    pub crosscheck_ok: bool,
    pub invariants: SurfaceInvariants,
    /// All problems in increasing key order.
    pub problems: Vec<ProblemOutcome>,
}

impl RigidityReport {
    pub fn unresolved(&self) -> impl Iterator<Item = &ProblemOutcome> {
        self.problems.iter().filter(|p| p.kind == CertificateKind::Unresolved)
    }

    pub fn nonvanishing(&self) -> impl Iterator<Item = &ProblemOutcome> {
        self.problems.iter().filter(|p| p.kind == CertificateKind::NonVanishing)
    }
}

#[derive(Clone, Copy)]
struct KeyStats {
    characters: u64,
    representative: Character,
}

fn merge(mut a: BTreeMap<ProblemKey, KeyStats>, b: BTreeMap<ProblemKey, KeyStats>) -> BTreeMap<ProblemKey, KeyStats> {
    for (k, s) in b {
        a.entry(k)
            .and_modify(|t| {
                t.characters += s.characters;
                t.representative = t.representative.min(s.representative);
            })
            .or_insert(s);
    }
    a
}

/// Proves every character problem at modulus `n` and aggregates the result.
pub fn rigidity_report(n: u32, registry: &Registry, options: &RigidityOptions) -> Result<RigidityReport, ReportError> {
    if n < 3 {
        return Err(ReportError::Modulus(n));
    }
    let reps = orbit_representatives(n);
    let weighted: Vec<(Character, u64)> = match options.mode {
        EnumerationMode::Orbits => reps.iter().map(|&(c, s)| (c, s as u64)).collect(),
        EnumerationMode::Full => (0..Character::count(n)).map(|c| (Character::from_code(n, c), 1)).collect(),
    };

    let keys = weighted
        .par_iter()
        .try_fold(BTreeMap::new, |mut acc: BTreeMap<ProblemKey, KeyStats>, &(psi, w)| {
            let key = VanishingProblem::from_character(&psi)?.key().canonical();
            acc.entry(key)
                .and_modify(|s| {
                    s.characters += w;
                    s.representative = s.representative.min(psi);
                })
                .or_insert(KeyStats { characters: w, representative: psi });
            Ok::<_, CharacterError>(acc)
        })
        .try_reduce(BTreeMap::new, |a, b| Ok(merge(a, b)))?;

    let keys: Vec<(ProblemKey, KeyStats)> = keys.into_iter().collect();
    let problems: Vec<ProblemOutcome> = keys
        .par_iter()
        .map(|&(key, stats)| {
            let certificate = prove_with(&key.problem(true), registry, &options.prove);
            ProblemOutcome {
                key,
                chi: chi_log(key.logset, key.twist),
                kind: certificate.kind(),
                characters: stats.characters,
                representative: stats.representative,
                certificate,
            }
        })
        .collect();

    let mut tally: BTreeMap<CertificateKind, u64> = CertificateKind::ALL.iter().map(|&k| (k, 0)).collect();
    let mut registry_usage = BTreeMap::new();
    let mut chi_total = 0;
    for p in &problems {
        *tally.entry(p.kind).or_default() += p.characters;
        for id in p.certificate.registry_ids() {
            *registry_usage.entry(id.to_string()).or_default() += p.characters;
        }
        chi_total += p.chi * p.characters as i64;
    }
    let invariants = closed_form(n);
    let rigid = problems.iter().all(|p| p.certificate.is_vanishing());

    Ok(RigidityReport {
        n,
        mode: options.mode,
        total_characters: Character::count(n),
        orbit_count: reps.len() as u64,
        distinct_problems: problems.len(),
        tally,
        registry_usage,
        rigid,
        chi_sum: chi_total,
        crosscheck_ok: chi_total == invariants.chi_theta,
        invariants,
        problems,
    })
}
