use thiserror::Error;

/// Errors raised by the model, the solvers and the oracles.
///
/// Item indices are 0-based, period numbers are 1-based (as in the usual
/// `W_1..W_T` notation).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("item {item}: profit must be strictly positive")]
    NonPositiveProfit { item: usize },
    #[error("item {item}: weight must be strictly positive")]
    NonPositiveWeight { item: usize },
    #[error("period {period}: capacity is smaller than the previous period's")]
    DecreasingCapacity { period: usize },
    #[error("period {period}: capacity must be nonnegative")]
    NegativeCapacity { period: usize },
    #[error("period {period}: lambda must be nonnegative")]
    NegativeLambda { period: usize },
    #[error("horizon is empty (no periods)")]
    EmptyHorizon,
    #[error("{capacities} capacities but {lambdas} lambdas")]
    LengthMismatch { capacities: usize, lambdas: usize },
    #[error("every lambda is zero; the empty solution is optimal")]
    AllLambdasZero,
    #[error("solution violates the capacity of period {period}")]
    InfeasibleSolution { period: usize },
    #[error("solution has {got} entries, instance has {expected} items")]
    SolutionShape { expected: usize, got: usize },
    #[error("item {item} introduced at period {period}, horizon is {horizon}")]
    PeriodOutOfRange {
        item: usize,
        period: usize,
        horizon: usize,
    },
    #[error("item {item} is never introduced")]
    ItemNotIntroduced { item: usize },
    #[error("profit class {class} does not exist")]
    ClassIndexOutOfRange { class: usize },
    #[error("count range [{from}, {to}] out of bounds for a class of {len} items")]
    CountOutOfRange { from: usize, to: usize, len: usize },
    #[error("utilization chain decreases at period {period}")]
    ChainNotMonotone { period: usize },
    #[error("accuracy must satisfy 1/eps integer and eps <= 1/5 (got 1/{inverse})")]
    InvalidAccuracy { inverse: u64 },
    #[error("public accuracy must lie in (0, 1)")]
    InvalidPublicAccuracy,
    #[error("enumeration needs {required} steps, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("cluster {cluster} has no periods")]
    EmptyCluster { cluster: usize },
    #[error("cluster table has no finite terminal state")]
    NoFeasibleState,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
