use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("simplicity violated: found a maximal clique of size {found}, expected {expected}")]
    SimplicityViolation { expected: usize, found: usize },
    #[error("h-polynomial is not palindromic: {0:?}")]
    NotPalindromic(Vec<i64>),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("polynomial degree {found} does not match dimension {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("facets {0:?} do not form a clique")]
    NotAClique(Vec<usize>),
    #[error("facets {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("invalid diagonal {{{a},{b}}} of a {m}-gon")]
    InvalidDiagonal { a: usize, b: usize, m: usize },
    #[error("invalid rank {0}")]
    InvalidRank(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("too many facets: {0} (at most {max})", max = crate::complex::MAX_FACETS)]
    TooManyFacets(usize),
    #[error("subset is not a member of the building set")]
    NotAMember,
    #[error("subset is the full ground set")]
    FullSet,
    #[error("invalid building set: {0}")]
    InvalidBuildingSet(String),
    #[error("building set is not flag")]
    NotFlag,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{needed} shaving steps needed, budget allows {max_steps}")]
    StepBudget { needed: usize, max_steps: usize },
    #[error("search time budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("no shaving sequence found")]
    SearchFailed,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
