use thiserror::Error;

use crate::character::Character;
use crate::lineset::LineSet;

#[derive(Debug, Error)]
pub enum CharacterError {
    #[error("modulus must be at least 2, got {0}")]
    Modulus(u32),
    #[error("internal inconsistency for character {character:?}: {detail}")]
    Inconsistent { character: Character, detail: String },
    #[error("rank-deficient log set {logset} of {character:?} matches no known shape")]
    Unclassified { character: Character, logset: LineSet },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VanishingError {
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("superset transfer invalid: slack {slack} > 0")]
    TransferInvalid { slack: i64 },
    #[error("superset transfer invalid: {0}")]
    TransferShape(String),
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("registry line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("registry entries {first} and {second} have the same canonical problem")]
    Duplicate { first: String, second: String },
    #[error("cannot read registry: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("intersection table failed audit: {0}")]
    Table(String),
    #[error("certificate does not replay: {0}")]
    Rejected(String),
}
