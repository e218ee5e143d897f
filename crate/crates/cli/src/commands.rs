use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use hk_core::cb::{census, check_level, to_svg, CbCheck, CbError};
use hk_core::character::{geometry_of, loop_value, rank_exception_census, CaseId, Character};
use hk_core::error::{CharacterError, RegistryError};
use hk_core::invariants::{
    chi_sum, closed_form, euler_by_stratification, rigidity_report, ReportError, RigidityReport,
};
use hk_core::lattice::{verify_dependencies, LinePair};
use hk_core::vanishing::{regenerate, Checker, ProveConfig, Registry};

use crate::config::{NRange, RunConfig};
use crate::report::{digest, to_sorted_json, InvariantsDoc, RigidityDoc, RigidityRun, Timing, SCHEMA_VERSION};

pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Cb(#[from] CbError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_USAGE
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--jobs must be positive".into())),
        Some(j) => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(j).build().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// The registry named by the config together with the digest of its bytes.
pub fn load_registry(config: &RunConfig) -> Result<(Registry, String), CliError> {
    match &config.registry {
        None => Ok((Registry::builtin().clone(), digest(Registry::builtin_text().as_bytes()))),
        Some(path) => {
            let bytes = fs::read(path).map_err(RegistryError::Io)?;
            let text = String::from_utf8(bytes).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok((Registry::parse(&text)?, digest(text.as_bytes())))
        }
    }
}

fn csv_rows(reports: &[RigidityReport], path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io { path: path.display().to_string(), source },
        other => CliError::Usage(format!("{other:?}")),
    })?;
    w.write_record(["n", "logset", "twist", "chi", "kind", "characters", "representative"])?;
    for r in reports {
        for p in &r.problems {
            w.write_record([
                r.n.to_string(),
                p.key.logset.to_string(),
                p.key.twist.to_string(),
                p.chi.to_string(),
                p.kind.name().to_string(),
                p.characters.to_string(),
                p.representative.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(())
}

pub fn cmd_rigidity(config: &RunConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    if config.range.start < 3 {
        return Err(CliError::Usage(format!("rigidity needs n >= 3, got {}", config.range.start)));
    }
    let (registry, reg_digest) = load_registry(config)?;
    let options = config.options();
    let mut reports = Vec::new();
    let mut docs = Vec::new();
    for n in config.range.iter() {
        let start = Instant::now();
        let report = with_pool(config.jobs, || rigidity_report(n, &registry, &options))??;
        let timing = config.timing.then(|| Timing { seconds: start.elapsed().as_secs_f64() });
        docs.push(RigidityDoc::build(&report, &reg_digest, timing));
        reports.push(report);
    }
    let code = docs.iter().map(RigidityDoc::exit_code).max().unwrap_or(0);
    let text = if config.range.is_single() {
        to_sorted_json(&docs[0])
    } else {
        to_sorted_json(&RigidityRun { schema_version: SCHEMA_VERSION, reports: docs.clone() })
    };
    if let Some(path) = &config.csv {
        csv_rows(&reports, path)?;
    }
    match &config.json {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            for d in &docs {
                emit(out, &format!("n={} verdict={} unresolved={}\n", d.n, d.verdict, d.unresolved_keys.len()))?;
            }
        }
        None => emit(out, &text)?,
    }
    Ok(code)
}

pub fn cmd_invariants(config: &RunConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    if config.range.start < 2 {
        return Err(CliError::Usage(format!("invariants need n >= 2, got {}", config.range.start)));
    }
    let mut docs = Vec::new();
    for n in config.range.iter() {
        let s = with_pool(config.jobs, || chi_sum(n))??;
        docs.push(InvariantsDoc::build(n, s));
    }
    let text = if config.range.is_single() { to_sorted_json(&docs[0]) } else { to_sorted_json(&docs) };
    match &config.json {
        Some(path) => write_file(path, text.as_bytes())?,
        None => emit(out, &text)?,
    }
    let ok = docs.iter().all(|d| d.euler_ok && d.noether_ok && d.crosscheck_ok);
    Ok(if ok { 0 } else { 1 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksDoc {
    pub schema_version: u32,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

/// Divisibility, ranges, the lambda sum and the pole implication for every
/// character of modulus `n`, and one case per nonzero character.
fn character_suite(n: u32) -> Result<(usize, BTreeMap<u8, u64>), CharacterError> {
    let nn = n as i64;
    let mut failures = 0;
    let mut cases = BTreeMap::new();
    for code in 0..Character::count(n) {
        let psi = Character::from_code(n, code);
        let g = geometry_of(&psi)?;
        let mut ok = g.f % nn == 0
            && (0..=5 * nn).contains(&g.f)
            && g.s % nn == 0
            && (0..=3 * nn).contains(&g.s)
            && g.lambda.iter().sum::<i64>() == 2 * g.f - g.s;
        for (i, &l) in g.lambda.iter().enumerate() {
            ok &= l % nn == 0 && (0..=2 * nn).contains(&l);
            if l == 2 * nn {
                ok &= loop_value(&psi, LinePair::of(i as u8 + 1, 5)) != n - 1;
            }
        }
        match g.case_id {
            CaseId::Numbered(k) => *cases.entry(k).or_default() += 1,
            CaseId::Trivial => ok &= psi.is_zero(),
        }
        failures += usize::from(!ok);
    }
    Ok((failures, cases))
}

pub fn run_checks(ranks: NRange, fault: Option<(usize, usize)>) -> Result<ChecksDoc, CliError> {
    let mut checks = Vec::new();
    let mut push =
        |name: &str, pass: bool, detail: String| checks.push(CheckResult { name: name.into(), pass, detail });

    let deps = verify_dependencies();
    push(
        "dependencies",
        deps.pass(),
        format!("{} subsets, {} counterexamples", deps.subsets_checked, deps.counterexamples.len()),
    );

    for n in ranks.iter() {
        let c = rank_exception_census(n)?;
        let kinds: Vec<&str> = c.by_kind.keys().map(String::as_str).collect();
        push(&format!("rank_exceptions_n{n}"), c.pass(), format!("{} deficient, shapes {kinds:?}", c.deficient));
    }

    for n in 3..=8 {
        let (failures, cases) = character_suite(n)?;
        push(
            &format!("character_numerics_n{n}"),
            failures == 0,
            format!("{failures} failures, {} cases hit", cases.len()),
        );
    }
    for n in 3..=8 {
        let s = chi_sum(n)?;
        let t = closed_form(n).chi_theta;
        push(&format!("chi_crosscheck_n{n}"), s == t, format!("sum {s}, expected {t}"));
    }
    let strat = (2..=20).all(|n| euler_by_stratification(n) == closed_form(n).euler);
    let noether = (2..=20).all(|n| closed_form(n).noether_holds());
    push("euler_stratification_2_20", strat, String::new());
    push("noether_2_20", noether, String::new());

    let checker = match fault {
        Some((r, c)) => Checker::with_fault(r, c, 1),
        None => Checker::new(),
    };
    let audit = checker.audit();
    push("checker_audit", audit.is_ok(), audit.err().map(|e| e.to_string()).unwrap_or_default());
    let registry = Registry::builtin();
    let report = rigidity_report(5, registry, &Default::default())?;
    let failed = report
        .problems
        .iter()
        .filter(|p| checker.replay(&p.key.problem(true), &p.certificate, registry).is_err())
        .count();
    push("replay_n5", failed == 0, format!("{failed} of {} certificates rejected", report.problems.len()));

    let cb: Vec<CbCheck> = (0..=8).map(check_level).collect::<Result<_, _>>()?;
    let bad: Vec<u32> = cb.iter().filter(|c| !c.pass()).map(|c| c.n).collect();
    push("cb_levels_0_8", bad.is_empty(), format!("failing levels {bad:?}"));

    let pass = checks.iter().all(|c| c.pass);
    Ok(ChecksDoc { schema_version: SCHEMA_VERSION, pass, checks })
}

pub fn cmd_checks(
    ranks: NRange,
    fault: Option<(usize, usize)>,
    json: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    if let Some((r, c)) = fault {
        if r >= 10 || c >= 10 {
            return Err(CliError::Usage(format!("fault position ({r},{c}) outside the 10x10 table")));
        }
    }
    if ranks.start < 2 {
        return Err(CliError::Usage("rank exception checks need n >= 2".into()));
    }
    let doc = run_checks(ranks, fault)?;
    for c in &doc.checks {
        emit(out, &format!("{} {} {}\n", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail))?;
    }
    if let Some(path) = json {
        write_file(path, to_sorted_json(&doc).as_bytes())?;
    }
    Ok(if doc.pass { 0 } else { 1 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbLine {
    pub label: String,
    pub coords: [i64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbDoc {
    pub schema_version: u32,
    pub n: u32,
    pub lines: Vec<CbLine>,
    pub points: usize,
    pub tally: BTreeMap<usize, usize>,
    pub formula_tally: BTreeMap<usize, usize>,
    pub pair_count: usize,
    pub pair_identity: bool,
    pub checks: CbCheck,
}

pub fn cmd_cb(config: &RunConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    if config.svg.is_some() && !config.range.is_single() {
        return Err(CliError::Usage("--emit-svg needs a single --n".into()));
    }
    let mut docs = Vec::new();
    for n in config.range.iter() {
        let c = census(n)?;
        if let Some(path) = &config.svg {
            write_file(path, to_svg(&c).as_bytes())?;
        }
        docs.push(CbDoc {
            schema_version: SCHEMA_VERSION,
            n,
            lines: c.lines.iter().map(|l| CbLine { label: l.label.clone(), coords: l.line.coords }).collect(),
            points: c.points.len(),
            tally: c.tally.clone(),
            formula_tally: c.formula_tally(),
            pair_count: c.pair_count(),
            pair_identity: c.pair_identity(),
            checks: check_level(n)?,
        });
    }
    let text = if config.range.is_single() { to_sorted_json(&docs[0]) } else { to_sorted_json(&docs) };
    match &config.json {
        Some(path) => write_file(path, text.as_bytes())?,
        None => emit(out, &text)?,
    }
    Ok(if docs.iter().all(|d| d.checks.pass()) { 0 } else { 1 })
}

/// Writes the regenerated registry, or with `check` compares it with the
/// file in use and exits 1 on any byte difference.
pub fn cmd_registry(
    config: &RunConfig,
    check: bool,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let prove = ProveConfig { depth_limit: config.max_superset, retry_undropped: config.retry_undropped };
    let text = with_pool(config.jobs, || regenerate(&prove).to_text())?;
    if check {
        let current = match &config.registry {
            None => Registry::builtin_text().to_string(),
            Some(p) => fs::read_to_string(p).map_err(RegistryError::Io)?,
        };
        let same = current == text;
        emit(
            out,
            &format!(
                "registry {} its regeneration (sha256 {})\n",
                if same { "matches" } else { "differs from" },
                digest(current.as_bytes())
            ),
        )?;
        return Ok(if same { 0 } else { 1 });
    }
    match out_path {
        Some(p) => write_file(p, text.as_bytes())?,
        None => emit(out, &text)?,
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::read_document;

    fn run(f: impl FnOnce(&mut Vec<u8>) -> Result<u8, CliError>) -> (u8, String) {
        let mut buf = Vec::new();
        let code = f(&mut buf).unwrap();
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn rigidity_at_three_names_the_orbit() {
        let config = RunConfig { range: NRange::single(3), ..Default::default() };
        let (code, text) = run(|o| cmd_rigidity(&config, o));
        assert_eq!(code, 1);
        let doc: RigidityDoc = read_document(&text).unwrap();
        let orbit = hk_core::character::canonical_character(&Character::new(3, [2, 2, 2, 1, 1]).unwrap());
        assert!(doc.nonvanishing.iter().any(|e| e.orbits.contains(&orbit.to_string()) && e.chi == -1));
        assert!(doc.timing.is_none());
    }

    #[test]
    fn rigidity_rejects_small_n() {
        let config = RunConfig { range: NRange::single(2), ..Default::default() };
        assert!(matches!(cmd_rigidity(&config, &mut Vec::new()), Err(CliError::Usage(_))));
    }

    #[test]
    fn jobs_do_not_change_the_report() {
        let base = RunConfig { range: NRange::single(6), ..Default::default() };
        let one = RunConfig { jobs: Some(1), ..base.clone() };
        assert_eq!(run(|o| cmd_rigidity(&base, o)), run(|o| cmd_rigidity(&one, o)));
    }

    #[test]
    fn invariants_at_two_and_three() {
        let (_, text) = run(|o| cmd_invariants(&RunConfig { range: NRange::single(2), ..Default::default() }, o));
        let doc: InvariantsDoc = read_document(&text).unwrap();
        assert_eq!(doc.k2, 0);
        let (code, text) = run(|o| cmd_invariants(&RunConfig { range: NRange::single(3), ..Default::default() }, o));
        let doc: InvariantsDoc = read_document(&text).unwrap();
        assert_eq!((code, doc.chi_theta, doc.crosscheck_ok), (0, 90, true));
    }

    #[test]
    fn checks_detect_a_fault() {
        let ranks = NRange { start: 4, end: 5 };
        assert!(run_checks(ranks, None).unwrap().pass);
        let doc = run_checks(ranks, Some((2, 7))).unwrap();
        assert!(!doc.pass);
        assert!(doc.checks.iter().any(|c| c.name == "checker_audit" && !c.pass));
    }

    #[test]
    fn cb_tally_at_four() {
        let (code, text) = run(|o| cmd_cb(&RunConfig { range: NRange::single(4), ..Default::default() }, o));
        let doc: CbDoc = read_document(&text).unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc.tally, BTreeMap::from([(2, 39), (3, 4), (4, 12), (5, 3)]));
        assert_eq!(doc.lines.len(), 18);
    }
}
