use thiserror::Error;

/// Why a multiplication table failed group-axiom validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupDefect {
    NonAssociative,
    NoIdentity,
    NoInverse,
}

impl std::fmt::Display for GroupDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GroupDefect::NonAssociative => "non-associative",
            GroupDefect::NoIdentity => "no-identity",
            GroupDefect::NoInverse => "no-inverse",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table is not a group law: {0}")]
    NotAGroup(GroupDefect),

    #[error("construction would exceed the order limit ({limit}): needs at least {needed}")]
    OrderLimitExceeded { limit: usize, needed: usize },

    #[error("subgroup is not normal in its parent")]
    NotNormal,

    #[error("element set is not a subgroup of the given parent")]
    NotASubgroup,

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("class functions live on different parent groups")]
    ParentMismatch,

    #[error("class function is not a character: inner products with the irreducibles are not nonnegative integers")]
    NotACharacter,

    #[error("inner product is not rational; the operands are not differences of characters")]
    IrrationalInnerProduct,

    #[error("subgroup enumeration exceeded the class budget ({limit})")]
    SearchBudgetExceeded { limit: usize },

    #[error("eigenspace splitting failed to separate the irreducibles (tried primes {tried:?})")]
    InternalSplitFailure { tried: Vec<u64> },

    #[error("irreducible {chi_index} violates the prime-index restriction dichotomy")]
    DichotomyViolation { chi_index: usize },

    #[error("base character label is not shift-invariant")]
    NotInvariant,

    #[error("a reported witness failed independent replay verification")]
    WitnessReplayFailed,

    #[error("unknown catalog group {0:?}")]
    UnknownGroup(String),

    #[error("invalid group file: {0}")]
    InvalidGroupFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
