//! Exact verification of infinitesimal rigidity for the Hirzebruch-Kummer
//! coverings `HK(n)` of the Del Pezzo surface `Y` of degree 5, plus the
//! iterated Campedelli-Burniat line configurations.

#![allow(clippy::needless_range_loop)]

pub mod cb;
pub mod character;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod lineset;
pub mod vanishing;

pub use character::{geometry_of, logset, Character, CharacterGeometry};
pub use error::{CharacterError, RegistryError, ReplayError, VanishingError};
pub use lattice::{pairing, DivisorClass, LinePair, Permutation5};
pub use lineset::LineSet;
pub use vanishing::{prove, Certificate, CertificateKind, Checker, Registry, VanishingProblem};
