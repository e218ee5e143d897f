use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hk_core::invariants::{EnumerationMode, RigidityOptions};
use hk_core::vanishing::{ProveConfig, DEFAULT_SUPERSET_DEPTH};

/// Inclusive range of moduli, written `a..b` or `a..=b`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: u32,
    pub end: u32,
}

impl NRange {
    pub fn single(n: u32) -> Self {
        NRange { start: n, end: n }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }

    pub fn is_single(&self) -> bool {
        self.start == self.end
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad bound {t:?}: {e}"));
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if a > b {
            return Err(format!("empty range {s}"));
        }
        Ok(NRange { start: a, end: b })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Everything a run depends on. Two equal configs give byte-identical
/// output, except for the `timing` field when it is switched on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub range: NRange,
    /// Default: orbit representatives.
    pub mode: EnumerationMode,
    /// `None` means the available parallelism.
    pub jobs: Option<usize>,
    /// `None` means the registry compiled into the binary.
    pub registry: Option<PathBuf>,
    pub max_superset: usize,
    pub retry_undropped: bool,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            range: NRange::single(5),
            mode: EnumerationMode::Orbits,
            jobs: None,
            registry: None,
            max_superset: DEFAULT_SUPERSET_DEPTH,
            retry_undropped: false,
            json: None,
            csv: None,
            svg: None,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn options(&self) -> RigidityOptions {
        RigidityOptions {
            mode: self.mode,
            prove: ProveConfig { depth_limit: self.max_superset, retry_undropped: self.retry_undropped },
        }
    }
}
