use std::fmt;

use serde::Serialize;

use crate::character::{geometry_of, Character};
use crate::error::CharacterError;
use crate::lattice::{line_class, pairing, s5_transform, DivisorClass, Permutation5};
use crate::lineset::LineSet;

/// Number of points blown up to obtain `Y`.
pub const BLOWN_UP_POINTS: i64 = 4;

/// A twisted logarithmic sheaf `Omega^1_Y(log T)(Delta)` whose first
/// cohomology is to be decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VanishingProblem {
    pub logset: LineSet,
    pub twist: DivisorClass,
    /// `H^2 = 0` holds by assumption.
    pub h2_zero: bool,
}

impl VanishingProblem {
    pub fn new(logset: LineSet, twist: DivisorClass, h2_zero: bool) -> Self {
        VanishingProblem { logset, twist, h2_zero }
    }

    /// The problem attached to a character. `H^2 = 0` is set for `n >= 3`,
    /// where every group element has order `n` and the cover is of general
    /// type.
    pub fn from_character(psi: &Character) -> Result<Self, CharacterError> {
        let g = geometry_of(psi)?;
        Ok(VanishingProblem { logset: g.logset, twist: g.twist, h2_zero: psi.modulus() >= 3 })
    }

    pub fn chi(&self) -> i64 {
        chi_log(self.logset, self.twist)
    }

    pub fn key(&self) -> ProblemKey {
        ProblemKey { logset: self.logset, twist: self.twist }
    }

    pub fn permuted(&self, t: &Permutation5) -> Self {
        VanishingProblem { logset: self.logset.permuted(t), twist: s5_transform(t, self.twist), h2_zero: self.h2_zero }
    }
}

/// Euler characteristic `Delta^2 - 5 + sum_{E in T} (1 + E.Delta)`.
pub fn chi_log(logset: LineSet, twist: DivisorClass) -> i64 {
    twist.self_intersection() - (BLOWN_UP_POINTS + 1)
        + logset.iter().map(|p| 1 + pairing(line_class(p.index()), twist)).sum::<i64>()
}

/// A `(T, Delta)` pair; ordered by the bit pattern of `T`, then by `Delta`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProblemKey {
    pub logset: LineSet,
    pub twist: DivisorClass,
}

impl ProblemKey {
    /// Least image under the symmetric group.
    pub fn canonical(&self) -> ProblemKey {
        Permutation5::all()
            .iter()
            .map(|t| ProblemKey { logset: self.logset.permuted(t), twist: s5_transform(t, self.twist) })
            .min()
            .expect("nonempty group")
    }

    pub fn problem(&self, h2_zero: bool) -> VanishingProblem {
        VanishingProblem::new(self.logset, self.twist, h2_zero)
    }
}

impl fmt::Debug for ProblemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.logset, self.twist)
    }
}

impl fmt::Display for ProblemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T={} D={}", self.logset, self.twist)
    }
}

/// Removes every pole line `E` with `E.Delta = -1`.
///
/// The quotient of the two sheaves is a sum of `O_P1(-1)`, so `H^0` and
/// `H^1` are unchanged in both directions.
pub fn drop_reduce(prob: &VanishingProblem) -> (VanishingProblem, LineSet) {
    let removed: LineSet = prob.logset.iter().filter(|p| pairing(line_class(p.index()), prob.twist) == -1).collect();
    (VanishingProblem { logset: prob.logset.difference(removed), ..*prob }, removed)
}
