//! Command-line front end: argument handling, report documents and the
//! subcommands of `hkrigid`.

pub mod commands;
pub mod config;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hk_core::invariants::EnumerationMode;

use commands::{cmd_cb, cmd_checks, cmd_invariants, cmd_registry, cmd_rigidity, CliError, EXIT_USAGE};
use config::{NRange, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "hkrigid",
    version,
    about = "Exact rigidity checks for Hirzebruch-Kummer coverings of the quintic Del Pezzo surface"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prove H^1 = 0 for every eigensheaf, or report what is left.
    Rigidity(RigidityArgs),
    /// Numerical invariants of the covering surface.
    Invariants(CommonArgs),
    /// Exhaustive self-checks of the lattice, characters and checker.
    Checks(ChecksArgs),
    /// Incidence census of the line configuration at level n.
    Cb(CbArgs),
    /// Regenerate or check the axiom registry.
    Registry(RegistryArgs),
}

#[derive(Debug, Args)]
pub struct Range {
    /// Single modulus.
    #[arg(long, conflicts_with = "n_range")]
    pub n: Option<u32>,
    /// Inclusive range `a..b`.
    #[arg(long = "n-range", value_name = "A..B")]
    pub n_range: Option<NRange>,
}

impl Range {
    fn get(&self, default: NRange) -> NRange {
        self.n.map(NRange::single).or(self.n_range).unwrap_or(default)
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub range: Range,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RigidityArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Enumerate orbit representatives (the default).
    #[arg(long, conflicts_with = "full")]
    pub orbits: bool,
    /// Enumerate every character.
    #[arg(long)]
    pub full: bool,
    /// Registry file; defaults to the built-in one.
    #[arg(long, value_name = "PATH")]
    pub registry: Option<PathBuf>,
    #[arg(long, default_value_t = hk_core::vanishing::DEFAULT_SUPERSET_DEPTH)]
    pub max_superset: usize,
    /// Also search the problem before pole lines are dropped.
    #[arg(long)]
    pub retry_undropped: bool,
    /// One row per distinct problem.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ChecksArgs {
    /// Moduli for the rank exception census.
    #[arg(long = "n-range", value_name = "A..B", default_value = "4..9")]
    pub n_range: NRange,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Add one to the checker's intersection number at ROW,COL.
    #[arg(long, hide = true, value_name = "ROW,COL", value_parser = parse_cell)]
    pub inject_fault: Option<(usize, usize)>,
}

#[derive(Debug, Args)]
pub struct CbArgs {
    #[command(flatten)]
    pub range: Range,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Draw the configuration as SVG.
    #[arg(long, value_name = "PATH")]
    pub emit_svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegistryArgs {
    /// Compare the registry in use with its regeneration instead of writing.
    #[arg(long)]
    pub check: bool,
    #[arg(long, value_name = "PATH")]
    pub registry: Option<PathBuf>,
    /// Where to write the regenerated registry; stdout by default.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = hk_core::vanishing::DEFAULT_SUPERSET_DEPTH)]
    pub max_superset: usize,
    #[arg(long)]
    pub retry_undropped: bool,
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn parse_cell(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s.split_once(',').ok_or("expected ROW,COL")?;
    Ok((r.trim().parse().map_err(|e| format!("{e}"))?, c.trim().parse().map_err(|e| format!("{e}"))?))
}

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Rigidity(a) => {
            let config = RunConfig {
                range: a.common.range.get(NRange::single(5)),
                mode: if a.full { EnumerationMode::Full } else { EnumerationMode::Orbits },
                jobs: a.common.jobs,
                registry: a.registry,
                max_superset: a.max_superset,
                retry_undropped: a.retry_undropped,
                json: a.common.json,
                csv: a.csv,
                timing: a.timing,
                ..Default::default()
            };
            cmd_rigidity(&config, out)
        }
        Command::Invariants(a) => {
            let config =
                RunConfig { range: a.range.get(NRange::single(5)), jobs: a.jobs, json: a.json, ..Default::default() };
            cmd_invariants(&config, out)
        }
        Command::Checks(a) => cmd_checks(a.n_range, a.inject_fault, a.json.as_deref(), out),
        Command::Cb(a) => {
            let config = RunConfig {
                range: a.range.get(NRange::single(0)),
                json: a.json,
                svg: a.emit_svg,
                ..Default::default()
            };
            cmd_cb(&config, out)
        }
        Command::Registry(a) => {
            let config = RunConfig {
                registry: a.registry,
                max_superset: a.max_superset,
                retry_undropped: a.retry_undropped,
                jobs: a.jobs,
                ..Default::default()
            };
            cmd_registry(&config, a.check, a.out.as_deref(), out)
        }
    }
}

/// Parses `args` and runs the command, mapping every failure to an exit
/// code. Help and version output exit with 0.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
