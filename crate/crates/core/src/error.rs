use thiserror::Error;

/// Errors raised by group construction, structural queries and the
/// factorization machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group order exceeds the configured limit of {limit}")]
    OrderLimitExceeded { limit: usize },
    #[error("subset is not central: {0}")]
    NotCentral(String),
    #[error("pairing is not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("cannot generate a subgroup from the empty set")]
    EmptyGeneratingSet,
    #[error("empty subset where a non-empty one is required")]
    EmptySet,
    #[error("subset is not a normal subgroup")]
    NotNormalSubgroup,
    #[error("subset is not normal (not a union of conjugacy classes): {0}")]
    NotNormal(String),
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("subset is not contained in the required ambient set: {0}")]
    NotContained(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("the given pair is not a set-direct factorization of Z")]
    NotADirectFactorizationOfZ,
    #[error("factorization system does not match the decomposition: {0}")]
    SystemMismatch(String),
    #[error("invalid factorization system: {0}")]
    InvalidSystem(String),
    #[error("invalid class choice: {0}")]
    InvalidChoice(String),
    #[error("index families have mismatched lengths: {0}")]
    IndexMismatch(String),
    #[error("element does not act semi-regularly on the conjugacy classes")]
    NotSemiRegular,
    #[error("element order must be p^k with p prime and k >= 2 (got {0})")]
    OrderNotPrimePowerAtLeastSquare(usize),
    #[error("factorization is not certified")]
    NotCertified,
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("time budget of {budget_secs} s exceeded after {found} factorizations")]
    TimeBudgetExceeded { budget_secs: u64, found: usize },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
