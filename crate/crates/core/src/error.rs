//! Crate-wide error type.

/// Errors produced by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An arrangement needs `2 <= k <= l`.
    #[error("invalid arrangement: need 2 <= k <= l, got k={k}, l={l}")]
    InvalidArity { k: u32, l: u32 },

    /// A value failed a structural invariant on construction.
    #[error("malformed {what}: {why}")]
    Malformed { what: &'static str, why: String },

    /// The named atom is not a member of the given set.
    #[error("atom {atom} is not a member of the set")]
    AtomNotInSet { atom: String },

    /// Inversion counts are only defined for disjoint inputs.
    #[error("sets must be disjoint (share {shared})")]
    NotDisjoint { shared: u32 },

    /// A construction would exceed the configured size ceiling.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    /// A parameter lies outside the regime an operation is defined for.
    #[error("regime violation: {0}")]
    Regime(String),

    /// Two differentials that must compose to zero do not.
    #[error("differentials do not compose to zero ({0})")]
    NonzeroComposition(String),

    /// `quotient_representatives` requires boundaries inside the cycle span.
    #[error("boundary vector {index} lies outside the cycle span")]
    BoundaryOutsideCycles { index: usize },

    /// Matrix or vector dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The graded product is only defined for compatible families.
    #[error("incompatible families: {0}")]
    Incompatible(String),

    /// No completion set `T` satisfies the replacement constraints.
    #[error("no valid completion set T exists for the requested replacement")]
    NoValidCompletion,

    /// The unit index carries no codegree.
    #[error("the unit index b_empty carries no codegree")]
    UnitCodegree,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn malformed(what: &'static str, why: impl Into<String>) -> Self {
        Error::Malformed {
            what,
            why: why.into(),
        }
    }
}
