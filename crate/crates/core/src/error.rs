use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("extension degrees must be positive (k = {k}, e = {e})")]
    BadDegree { k: u32, e: u32 },

    #[error("field of cardinality {size} exceeds the cap {cap}")]
    CapExceeded { size: BigUint, cap: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("coordinate vector does not describe an element of this field")]
    BadCoordinates,

    #[error("exponent {n} is outside (0, q^e - 1)")]
    ExponentOutOfRange { n: BigUint },

    #[error("exponent plan precondition violated: {0}")]
    PlanPrecondition(String),

    #[error("gcd(a, pe) = {gcd} != 1, so the linearized kernel is nontrivial")]
    KernelNontrivial { gcd: u64 },

    #[error("case not covered: {0}")]
    NotDispatchable(String),

    #[error("no closed form covers this case: {0}")]
    NoClosedForm(String),

    #[error("method does not apply to this case: {0}")]
    NotApplicable(String),

    #[error("enumeration budget of {budget} states exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("value does not fit the machine-word fast path: {0}")]
    Overflow(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
