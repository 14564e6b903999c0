use crate::groups::Element;

/// Error type shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("alphabet mismatch: expected q={expected}, got q={got}")]
    AlphabetMismatch { expected: usize, got: usize },

    #[error("infinite family: {0}")]
    InfiniteFamily(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no disjoint translate found in {0}")]
    NoDisjointTranslate(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("subgroup is not normal (witness g={g:?}, k={k:?})")]
    NotNormal { g: Element, k: Element },

    #[error("subgroup is not invariant under the homomorphism (witness k={k:?})")]
    NotInvariant { k: Element },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
