use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {input:?} as a rational: {reason}")]
    Parse { input: String, reason: String },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: String },

    #[error("{what} = {value} is out of range: {expected}")]
    OutOfRange {
        what: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("{value} has a prime factor above the trial-division bound {bound}")]
    FactorBoundExceeded { value: String, bound: u64 },

    #[error("slope {0} equals 1; multiplicative dependence is degenerate")]
    DegenerateSlope(String),

    #[error("pair (r = {r}, rho = {rho}) is not never-connect")]
    NotNeverConnect { r: String, rho: String },

    #[error("interval [{lo}, {hi}] is empty")]
    EmptyInterval { lo: String, hi: String },

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} exhausted its budget of {budget}")]
    BudgetExhausted { what: &'static str, budget: u64 },

    #[error("depth {depth} outside the supported range 1..={cap}")]
    DepthOutOfRange { depth: usize, cap: usize },

    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("point does not lie on any branch")]
    NotOnBranch,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("classification is {found}, expected {expected}")]
    WrongKind { expected: String, found: String },
}

impl Error {
    /// Budget or size caps, as opposed to malformed input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::BudgetExhausted { .. }
                | Error::DepthOutOfRange { .. }
                | Error::FactorBoundExceeded { .. }
        )
    }
}
