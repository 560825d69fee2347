use thiserror::Error;

use crate::verdict::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed element {tuple:?}: {reason}")]
    MalformedElement { tuple: Vec<u32>, reason: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid semigroup table: {0}")]
    InvalidSemigroup(String),

    /// A validator rejected its input; the witness pins down the failing instance.
    #[error("{what} rejected: {witness}")]
    Rejected { what: String, witness: Witness },

    #[error("enumeration budget exceeded: {needed} primitive checks needed, limit is {limit}")]
    Budget { needed: u128, limit: u64 },

    #[error("incompatible structures: {0}")]
    Incompatible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported structure: {0}")]
    Unsupported(String),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    /// Raised when a property that the theory guarantees does not hold.
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn rejected(what: impl Into<String>, witness: Witness) -> Self {
        Error::Rejected { what: what.into(), witness }
    }
}
