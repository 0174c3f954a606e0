use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(usize),
    #[error("field of size {p}^{d} does not fit the packed representation")]
    FieldTooLarge { p: u64, d: usize },
    #[error("modulus is not monic of degree {0}")]
    BadModulus(usize),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("F_{small} does not embed into F_{big}")]
    NotASubfield { small: u64, big: u64 },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular matrix")]
    Singular,
    #[error("point at infinity has no affine coordinate")]
    PointAtInfinity,
    #[error("budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-integral intermediate in Newton identities at index {0}")]
    NonIntegral(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Fails with [`Error::BudgetExceeded`] when `needed > budget`.
pub(crate) fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}
