use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The map is defined on integers >= 2; 0 and 1 are neither prime nor composite.
    #[error("value {0} is outside the map domain (must be >= 2)")]
    OutsideDomain(u64),

    #[error("k must be a positive integer")]
    ZeroShift,

    #[error("factor table limit must be at least 2, got {0}")]
    LimitTooSmall(u64),

    #[error("cannot allocate a factor table up to {limit} ({bytes} bytes requested)")]
    TableAllocation { limit: u64, bytes: u64 },

    #[error("requested limit {requested} exceeds the factor table limit {limit}")]
    LimitExceedsTable { requested: u64, limit: u64 },

    /// The sieve is too small for the operation; `required` names the bound to rebuild with.
    #[error("factor table limit {limit} is below the required bound {required}")]
    TableTooSmall { required: u64, limit: u64 },

    #[error("arithmetic overflow in {op}")]
    Overflow { op: &'static str },

    /// Mathematically every orbit repeats; hitting this signals a defect or overflow.
    #[error("orbit of {x0} under k={k} exceeded {max_steps} steps without repeating")]
    IterationBudget { x0: u64, k: u64, max_steps: u64 },

    #[error("values do not close into a cycle: {value} maps to {actual}, expected {expected}")]
    NotACycle {
        value: u64,
        actual: u64,
        expected: u64,
    },

    #[error("cycle values must be nonempty and pairwise distinct")]
    InvalidCycle,

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by the sieve budget (memory or an undersized table).
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::TableAllocation { .. } | Error::TableTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
